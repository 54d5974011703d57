#pragma once
// Batch pipeline: one simulated repetition end to end, the multi-repetition
// harness with repetition-level parallelism, aggregation, and report
// emission (CSV + versioned JSON).
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "setlabel/conformal.hpp"
#include "setlabel/estimators.hpp"
#include "setlabel/simgen.hpp"

namespace setlabel {

enum class Method { naive, naive_boot, weighted_boot };
std::string method_name(Method m);
Method parse_method(const std::string& name);

struct RunConfig {
  int scenario = 1;
  int n = 2000;
  int n_boot = 200;   // desk scale; the full-scale runs use 500
  int n_reps = 200;   // desk scale; the full-scale runs use 1000
  std::vector<double> alpha = {0.10, 0.10, 0.10};
  std::set<Method> methods = {Method::naive, Method::naive_boot, Method::weighted_boot};
  Penalty penalty;    // estimator spec for the probability model
  OptConfig opt;
  SimConfig::LabelMode label_mode = SimConfig::LabelMode::categorical_draw;
  double weibull_a = 1.0;
  double weibull_b = 90.0;
  double beta_scale = 0.7;
  double censor_horizon = 365.0;
  std::uint64_t master_seed = 33;
  int threads = 0;         // worker count for repetitions; 0 = hardware
  double ci_level = 0.95;  // bootstrap percentile interval level
  bool strict = false;     // treat a non-converged fit as a repetition failure
  std::string out_dir;

  void validate() const;  // throws on out-of-range fields
};

// Point estimate or bootstrap summary of one statistic within a repetition.
// Point values carry NaN bounds and defined = 1 (0 when undefined).
struct StatCell {
  double mean = 0, lo = 0, hi = 0;
  long defined = 0;
};

inline constexpr int kMeasureCount = 8;
// Row order of the per-class measure tables.
const std::array<std::string, kMeasureCount>& measure_names();  // accuracy..fn
inline constexpr int kSurvStatCount = 3;
const std::array<std::string, kSurvStatCount>& surv_stat_names();  // s90, s365, median

struct MethodRepResult {
  std::vector<StatCell> coverage;  // per class
  // measures[m][c]: measure m for class c (c = k is the macro column; the
  // count measures tp/tn/fp/fn have no macro and hold NaN there).
  std::array<std::vector<StatCell>, kMeasureCount> measures;
  // surv_pred[c][s] / surv_bias[c][s]: predicted-stratum estimate and bias
  // against the observed stratum, statistic s in {s90, s365, median}.
  std::vector<std::array<StatCell, kSurvStatCount>> surv_pred;
  std::vector<std::array<StatCell, kSurvStatCount>> surv_bias;
};

struct RepResult {
  int rep = 0;
  std::uint64_t stream_seed = 0;  // derived dataset stream (diagnostics)
  std::vector<long> val_class_counts;
  // Weighted-split artifacts (empty when weighted_boot not requested).
  std::vector<double> thresholds;
  std::vector<long> calib_counts;
  std::vector<double> weighted_cover_point;  // label-set coverage on validation
  AmbiguityProfile ambiguity;
  bool fit_converged = true;  // all fits this repetition converged
  // Observed-class strata on the full validation cohort (NaN = undefined).
  std::vector<std::array<double, kSurvStatCount>> observed_surv;
  std::map<std::string, MethodRepResult> methods;
};

struct RepetitionReport {
  RunConfig config;
  std::vector<RepResult> reps;
};

// One simulated repetition on the stream derived from (master_seed, rep).
RepResult run_scenario_rep(const RunConfig& cfg, int rep);

// Single-repetition convenience (the Algorithm-box pipeline).
RepetitionReport run_scenario(const RunConfig& cfg);

// n_reps repetitions on independent streams, repetition-level parallelism.
// A failed repetition aborts the whole run, reporting its index and seed.
RepetitionReport run_repetitions(const RunConfig& cfg, int n_reps);

// Across-repetition aggregate of one statistic: mean/sd over defined
// repetition values, the stated 0.95*sd reporting rule, the conventional
// 1.96*sd interval, and the mean of per-repetition bootstrap bounds.
struct AggregateStat {
  double mean = 0, sd = 0;
  double pr_lo = 0, pr_hi = 0;      // mean -/+ 0.95 * sd
  double ci196_lo = 0, ci196_hi = 0;
  double boot_lo = 0, boot_hi = 0;  // mean of per-rep bootstrap bounds
  long defined = 0;                 // repetitions contributing
};

AggregateStat aggregate_values(const std::vector<double>& values);
AggregateStat aggregate_cells(const std::vector<StatCell>& cells);

struct Aggregates {
  std::vector<AggregateStat> thresholds;            // per class
  std::vector<AggregateStat> weighted_cover_point;  // per class
  AggregateStat singleton_share_overall;
  std::vector<AggregateStat> singleton_share_by_class;
  std::vector<AggregateStat> ambiguity_share_overall;        // per cardinality 0..k
  std::vector<std::vector<AggregateStat>> ambiguity_share_by_class;  // [class][card]
  std::vector<std::array<AggregateStat, kSurvStatCount>> observed_surv;
  std::map<std::string, std::vector<AggregateStat>> coverage;  // per method, per class
  std::map<std::string, std::array<std::vector<AggregateStat>, kMeasureCount>> measures;
  std::map<std::string, std::vector<std::array<AggregateStat, kSurvStatCount>>> surv_pred;
  std::map<std::string, std::vector<std::array<AggregateStat, kSurvStatCount>>> surv_bias;
};

Aggregates aggregate(const RepetitionReport& report);

// Stable artifact names inside cfg.out_dir: config.txt always; coverage.csv,
// thresholds.csv, metrics.csv, ambiguity.csv, survival.csv and report.json
// only when the method set is non-empty. formats selects {"csv", "json"}.
void emit_report(const RepetitionReport& report, const std::set<std::string>& formats,
                 const std::string& out_dir);

}  // namespace setlabel
