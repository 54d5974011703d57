#include "setlabel/simgen.hpp"

#include <cmath>

#include "setlabel/conformal.hpp"

namespace setlabel {
namespace {

constexpr double kCopulaCorr = 0.7;
constexpr double kPoissonLambda = 3.0;

}  // namespace

const std::vector<int>& scenario_mask(int scenario) {
  static const std::vector<int> s1 = {1, 3, 5, 6, 7, 8, 9, 10, 11, 13};
  static const std::vector<int> s2 = {1, 2, 3, 4, 5, 6, 13};
  static const std::vector<int> s3 = {2, 4, 5, 6, 7, 8, 9, 10, 12, 13, 14, 15};
  switch (scenario) {
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    default:
      throw DimensionMismatch("scenario_mask: scenario must be 1, 2 or 3, got " +
                              std::to_string(scenario));
  }
}

FeatureMatrix generate_covariates(long n, Rng& rng) {
  FeatureMatrix X;
  X.values.resize(n, 15);
  X.col_kinds = {ColKind::continuous, ColKind::continuous, ColKind::continuous,
                 ColKind::continuous, ColKind::continuous, ColKind::continuous,
                 ColKind::binary,     ColKind::binary,     ColKind::binary,
                 ColKind::binary,     ColKind::binary,     ColKind::binary,
                 ColKind::binary,     ColKind::count,      ColKind::count};

  const std::array<std::pair<double, double>, 6> normals = {
      {{75.0, 5.0}, {45000.0, 10000.0}, {23.0, 4.0}, {70.0, 5.0}, {5.0, 2.0}, {0.0, 1.0}}};
  for (int j = 0; j < 6; ++j) {
    for (long i = 0; i < n; ++i) {
      X.values(i, j) = rng.normal(normals[static_cast<std::size_t>(j)].first,
                                  normals[static_cast<std::size_t>(j)].second);
    }
  }
  const std::array<double, 7> bern = {0.5, 0.25, 0.3, 0.7, 0.6, 0.7, 0.4};
  for (int j = 0; j < 7; ++j) {
    for (long i = 0; i < n; ++i) {
      X.values(i, 6 + j) = rng.bernoulli(bern[static_cast<std::size_t>(j)]) ? 1.0 : 0.0;
    }
  }
  // Correlated Poisson pair: bivariate normal with correlation 0.7, each
  // coordinate standardized, mapped through the normal CDF and inverted
  // through the Poisson(3) quantile.
  const double cross = std::sqrt(1.0 - kCopulaCorr * kCopulaCorr);
  for (long i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = kCopulaCorr * z1 + cross * rng.normal();
    X.values(i, 13) = static_cast<double>(poisson_quantile(normal_cdf(z1), kPoissonLambda));
    X.values(i, 14) = static_cast<double>(poisson_quantile(normal_cdf(z2), kPoissonLambda));
  }
  return X;
}

std::array<double, 3> probs_from_linear_predictors(double lp1, double lp2) {
  const double m = std::max({0.0, lp1, lp2});
  const double e1 = std::exp(lp1 - m);
  const double e2 = std::exp(lp2 - m);
  const double e3 = std::exp(-m);
  const double denom = e1 + e2 + e3;
  return {e1 / denom, e2 / denom, e3 / denom};
}

std::pair<double, double> sim_linear_predictors(const FeatureMatrix& X, long row) {
  if (X.p() < 15) {
    throw DimensionMismatch("sim_linear_predictors: need all 15 covariates");
  }
  const auto v = [&](int id) { return X.values(row, id - 1); };
  const double lp1 = 1.8 * (-8.25 + 0.2 * v(1) + 0.24 * (v(7) * v(10)) - 0.3 * v(3) +
                            0.21 * std::sqrt(v(14)) - 0.9 * v(9) + 0.9 * v(11) +
                            0.1 * std::sin(v(5)));
  const double lp2 = 1.8 * (-1.95 + 0.04 * v(1) + 0.5 * (v(7) * v(10)) - 0.03 * v(3) +
                            0.032 * std::sqrt(v(14)) - 0.02 * v(9) + 0.003 * v(11) +
                            0.31 * std::sin(v(5)));
  return {lp1, lp2};
}

ClassProbabilities sim_class_probabilities(const FeatureMatrix& X) {
  ClassProbabilities probs;
  probs.p.resize(X.n(), 3);
  for (long i = 0; i < X.n(); ++i) {
    const auto [lp1, lp2] = sim_linear_predictors(X, i);
    const std::array<double, 3> p = probs_from_linear_predictors(lp1, lp2);
    probs.p(i, 0) = p[0];
    probs.p(i, 1) = p[1];
    probs.p(i, 2) = p[2];
  }
  return probs;
}

std::vector<int> draw_labels(const ClassProbabilities& probs,
                             SimConfig::LabelMode mode, Rng& rng) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(probs.n()));
  for (long i = 0; i < probs.n(); ++i) {
    if (mode == SimConfig::LabelMode::argmax) {
      int best = 0;
      for (int c = 1; c < probs.k(); ++c) {
        if (probs.p(i, c) > probs.p(i, best)) best = c;
      }
      out.push_back(best + 1);
    } else {
      const double u = rng.uniform01();
      double acc = 0.0;
      int pick = probs.k();
      for (int c = 0; c < probs.k(); ++c) {
        acc += probs.p(i, c);
        if (u < acc) {
          pick = c + 1;
          break;
        }
      }
      out.push_back(pick);
    }
  }
  return out;
}

double weibull_time(double u, double a, double b, int label, double beta_scale) {
  // Class effect beta_k = beta_scale * k, applied as exp(-beta_k).
  const double beta_k = beta_scale * static_cast<double>(label);
  return std::pow(-std::log(u) * b * std::exp(-beta_k), 1.0 / a);
}

SurvivalData simulate_survival(const std::vector<int>& labels, const SimConfig& cfg,
                               Rng& rng) {
  SurvivalData sd;
  sd.time.reserve(labels.size());
  sd.event.reserve(labels.size());
  for (int y : labels) {
    const double u = rng.uniform01_open0();
    const double t = weibull_time(u, cfg.weibull_a, cfg.weibull_b, y, cfg.beta_scale);
    const bool event = t <= cfg.censor_horizon;
    sd.time.push_back(event ? t : cfg.censor_horizon);
    sd.event.push_back(event ? 1 : 0);
  }
  return sd;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_cohorts(const LabeledDataset& ds, int k, Rng& rng) {
  return stratified_halves(ds.labels, k, rng, /*odd_to_first=*/true);
}

LabeledDataset generate_dataset(const SimConfig& cfg) {
  if (cfg.n < 12) {
    throw DimensionMismatch("generate_dataset: n must be >= 4*k = 12");
  }
  Rng rng_cov(cfg.rng.child(1));
  Rng rng_lab(cfg.rng.child(2));
  Rng rng_surv(cfg.rng.child(3));

  LabeledDataset ds;
  ds.features = generate_covariates(cfg.n, rng_cov);
  const ClassProbabilities probs = sim_class_probabilities(ds.features);
  ds.labels = draw_labels(probs, cfg.label_mode, rng_lab);
  ds.survival = simulate_survival(ds.labels, cfg, rng_surv);
  return ds;
}

}  // namespace setlabel
