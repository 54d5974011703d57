#pragma once
// Synthetic study generator: 15 covariates with fixed marginals, three-class
// multinomial labels from the displayed linear predictors, Weibull survival
// with administrative censoring, scenario prediction masks and cohort splits.
#include <array>
#include <vector>

#include "setlabel/rng.hpp"
#include "setlabel/types.hpp"

namespace setlabel {

struct SimConfig {
  int n = 2000;
  int scenario = 1;
  double weibull_a = 1.0;
  double weibull_b = 90.0;
  double beta_scale = 0.7;        // class effect beta_k = beta_scale * k
  double censor_horizon = 365.0;  // administrative censoring, days
  enum class LabelMode { categorical_draw, argmax };
  LabelMode label_mode = LabelMode::categorical_draw;
  RngSpec rng;
};

// 1-based covariate ids used for prediction in each scenario.
const std::vector<int>& scenario_mask(int scenario);

// Covariates X1..X15: six normals, seven Bernoullis, and a correlated
// Poisson(3) pair via a Gaussian copula (correlation 0.7; each coordinate is
// standardized before the CDF map so the Poisson marginals are exact).
// Consumption order: columns X1..X13, then one (z1, z2) pair per row.
FeatureMatrix generate_covariates(long n, Rng& rng);

// The displayed three-class probability construction (class 3 reference).
ClassProbabilities sim_class_probabilities(const FeatureMatrix& X);

// Softmax of two linear predictors against the zero reference logit.
std::array<double, 3> probs_from_linear_predictors(double lp1, double lp2);

// Linear predictors for one row (exposed for hand-evaluation tests).
std::pair<double, double> sim_linear_predictors(const FeatureMatrix& X, long row);

std::vector<int> draw_labels(const ClassProbabilities& probs,
                             SimConfig::LabelMode mode, Rng& rng);

// T = (-log(U) * b * exp(-y * beta))^(1/a), censored at the horizon;
// one uniform draw per row in row order.
SurvivalData simulate_survival(const std::vector<int>& labels, const SimConfig& cfg,
                               Rng& rng);

// Event time for a single uniform draw (exposed for plug-in tests).
double weibull_time(double u, double a, double b, int label, double beta_scale);

// Stratified development/validation halves (per-class counts differ by at
// most one; the development half takes a class's odd row).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_cohorts(const LabeledDataset& ds, int k, Rng& rng);

// Full dataset: covariates, labels, survival. Consumes cfg.rng-derived child
// streams (1 = covariates, 2 = labels, 3 = survival).
LabeledDataset generate_dataset(const SimConfig& cfg);

}  // namespace setlabel
