#include "setlabel/survival.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace setlabel {

KMCurve kaplan_meier(const SurvivalData& sd) {
  const std::size_t n = sd.size();
  if (n == 0) throw EmptyData("kaplan_meier: empty sample");
  if (sd.event.size() != n) throw DimensionMismatch("kaplan_meier: time/event length mismatch");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sd.time[a] < sd.time[b]; });

  KMCurve c;
  c.n = static_cast<long>(n);
  c.max_follow_up = sd.time[order.back()];

  // The running product is tracked as a reduced integer fraction while it
  // fits in 64 bits, so small-sample curves equal the correctly rounded
  // rational values of the product-limit definition (a hand calculation
  // matches to the last bit, and without censoring the curve collapses to
  // the empirical survivor function exactly). Once the fraction would
  // overflow, later steps continue as ordinary floating-point products from
  // the last exact value.
  double s = 1.0;
  std::uint64_t num = 1;
  std::uint64_t den = 1;
  bool exact = true;
  std::size_t i = 0;
  while (i < n) {
    const double t = sd.time[order[i]];
    long events = 0;
    std::size_t j = i;
    while (j < n && sd.time[order[j]] == t) {
      events += sd.event[order[j]] ? 1 : 0;
      ++j;
    }
    if (events > 0) {
      const long at_risk = static_cast<long>(n - i);  // ties (incl. censored at t) still at risk
      const auto surv = static_cast<std::uint64_t>(at_risk - events);
      const auto risk = static_cast<std::uint64_t>(at_risk);
      constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
      if (exact && (surv == 0 || num <= kMax / surv) && den <= kMax / risk) {
        num *= surv;
        den *= risk;
        const std::uint64_t g = std::gcd(num, den);  // gcd(0, den) == den
        num /= g;
        den /= g;
        s = static_cast<double>(num) / static_cast<double>(den);
      } else {
        exact = false;
        s *= 1.0 - static_cast<double>(events) / static_cast<double>(at_risk);
      }
      c.times.push_back(t);
      c.survival.push_back(s);
      c.n_risk.push_back(at_risk);
      c.n_event.push_back(events);
    }
    i = j;
  }
  return c;
}

std::optional<double> survival_at(const KMCurve& curve, double t) {
  if (t < 0.0) throw DimensionMismatch("survival_at: negative time");
  // Value of the step function at t: survival after the last event time <= t.
  double s = 1.0;
  for (std::size_t j = 0; j < curve.times.size(); ++j) {
    if (curve.times[j] <= t) s = curve.survival[j];
    else break;
  }
  const double s_final = curve.survival.empty() ? 1.0 : curve.survival.back();
  if (t > curve.max_follow_up && s_final > 0.0) return std::nullopt;
  return s;
}

std::optional<double> median_survival(const KMCurve& curve) {
  for (std::size_t j = 0; j < curve.times.size(); ++j) {
    if (curve.survival[j] <= 0.5) return curve.times[j];
  }
  return std::nullopt;
}

std::vector<StratumEstimates> stratified_estimates(const SurvivalData& sd,
                                                   const std::vector<int>& labels, int k,
                                                   double h1, double h2) {
  if (labels.size() != sd.size()) {
    throw DimensionMismatch("stratified_estimates: labels length != survival rows");
  }
  std::vector<StratumEstimates> out(static_cast<std::size_t>(k));
  for (int c = 1; c <= k; ++c) {
    SurvivalData stratum;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) {
        stratum.time.push_back(sd.time[i]);
        stratum.event.push_back(sd.event[i]);
      }
    }
    StratumEstimates& est = out[static_cast<std::size_t>(c - 1)];
    est.n = static_cast<long>(stratum.size());
    if (est.n == 0) continue;  // empty stratum: reported undefined
    const KMCurve curve = kaplan_meier(stratum);
    est.s90 = survival_at(curve, h1);
    est.s365 = survival_at(curve, h2);
    est.median = median_survival(curve);
  }
  return out;
}

std::vector<ClassBias> survival_bias(const std::vector<StratumEstimates>& pred,
                                     const std::vector<StratumEstimates>& obs) {
  if (pred.size() != obs.size()) {
    throw DimensionMismatch("survival_bias: class set mismatch");
  }
  auto diff = [](const std::optional<double>& a,
                 const std::optional<double>& b) -> std::optional<double> {
    if (a && b) return *a - *b;
    return std::nullopt;
  };
  std::vector<ClassBias> out;
  out.reserve(pred.size());
  for (std::size_t c = 0; c < pred.size(); ++c) {
    out.push_back(ClassBias{diff(pred[c].s90, obs[c].s90),
                            diff(pred[c].s365, obs[c].s365),
                            diff(pred[c].median, obs[c].median)});
  }
  return out;
}

RepetitionInterval repetition_interval(const std::vector<double>& estimates,
                                       double multiplier) {
  if (estimates.size() < 2) {
    throw TooFewSamples("repetition_interval: need >= 2 estimates, got " +
                        std::to_string(estimates.size()));
  }
  const double n = static_cast<double>(estimates.size());
  double mean = 0.0;
  for (double v : estimates) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : estimates) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return RepetitionInterval{mean, sd, mean - multiplier * sd, mean + multiplier * sd};
}

}  // namespace setlabel
