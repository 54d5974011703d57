#pragma once
// Kaplan-Meier estimation under right censoring, horizon/median extraction,
// label-stratified estimates, bias versus observed strata, and the
// across-repetition interval rules.
#include <optional>
#include <vector>

#include "setlabel/types.hpp"

namespace setlabel {

struct KMCurve {
  std::vector<double> times;     // distinct event times, ascending
  std::vector<double> survival;  // S(t) just after each event time
  std::vector<long> n_risk;      // at risk at each event time
  std::vector<long> n_event;     // events at each event time
  double max_follow_up = 0;      // largest observed time (event or censored)
  long n = 0;
};

// Product-limit estimator; censored-at-event-time observations count as at
// risk at that time. Throws EmptyData on an empty sample.
KMCurve kaplan_meier(const SurvivalData& sd);

// Right-continuous step evaluation. Undefined (nullopt) when t exceeds the
// last follow-up with the risk set unresolved (final S > 0); never
// extrapolated.
std::optional<double> survival_at(const KMCurve& curve, double t);

// Smallest t with S(t) <= 0.5; nullopt = not reached.
std::optional<double> median_survival(const KMCurve& curve);

struct StratumEstimates {
  long n = 0;  // stratum size; 0 marks an empty stratum (all fields undefined)
  std::optional<double> s90, s365, median;
};

// KM per label stratum, then horizon/median extraction. Empty strata are
// reported with n = 0 rather than thrown, so bootstrap resamples that miss a
// class degrade to undefined statistics.
std::vector<StratumEstimates> stratified_estimates(const SurvivalData& sd,
                                                   const std::vector<int>& labels, int k,
                                                   double h1 = 90.0, double h2 = 365.0);

struct ClassBias {
  std::optional<double> s90, s365, median;  // predicted minus observed
};

// Elementwise difference; undefined inputs propagate to undefined bias.
std::vector<ClassBias> survival_bias(const std::vector<StratumEstimates>& pred,
                                     const std::vector<StratumEstimates>& obs);

struct RepetitionInterval {
  double mean = 0, sd = 0, lo = 0, hi = 0;  // lo/hi = mean -/+ multiplier * sd
};

// Across-repetition interval: mean +/- multiplier * sample sd (n-1). The
// default multiplier 0.95 implements the stated reporting rule; pass 1.96 for
// the conventional variant. Throws TooFewSamples below 2 values.
RepetitionInterval repetition_interval(const std::vector<double>& estimates,
                                       double multiplier = 0.95);

}  // namespace setlabel
