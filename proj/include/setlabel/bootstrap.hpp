#pragma once
// Bootstrap resampling engine: index draws, percentile intervals, and the
// label-aware resampling loop shared by the naive and weighted methods.
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "setlabel/labeling.hpp"
#include "setlabel/rng.hpp"
#include "setlabel/types.hpp"

namespace setlabel {

// n uniform with-replacement draws from 0..n-1.
std::vector<std::size_t> resample_indices(std::size_t n, Rng& rng);

// Empirical quantile interval at `level` using inclusive linear interpolation
// (h = (n-1)p, the "type 7" rule). Throws TooFewSamples below 2 values.
std::pair<double, double> percentile_interval(std::vector<double> samples, double level);

// Single quantile under the same rule; input must be sorted ascending.
double quantile_sorted(const std::vector<double>& sorted, double p);

struct BootstrapSummary {
  double mean = 0, lo = 0, hi = 0;
  int n_boot = 0;
  long defined = 0;               // resamples where the statistic was defined
  std::vector<double> samples;    // retained when keep_samples is set
};

// One resample: positions index into the validation rows; labels are the
// per-position assignments made by the labeler for this resample.
struct BootstrapDraw {
  const std::vector<std::size_t>& idx;
  const std::vector<int>& labels;
};

// Evaluates n_stats statistics per resample (write NaN for an undefined
// statistic; summaries then average over the defined resamples only,
// pairwise per statistic). Resample b consumes the child stream spec.child(b)
// for both its index draws and its label sampling, so results are identical
// under any execution order.
using StatVecFn = std::function<void(const BootstrapDraw&, std::span<double>)>;

std::vector<BootstrapSummary> run_bootstrap_vec(std::size_t n_rows,
                                                const LabelSets* sets,  // null => naive
                                                const std::vector<int>& argmax_labels,
                                                LabelerKind kind, std::size_t n_stats,
                                                const StatVecFn& eval, int n_boot,
                                                RngSpec spec, double level = 0.95,
                                                bool keep_samples = false);

// Scalar statistics over a labeled validation set (the operation contract:
// draw indices, assign labels via the labeler, evaluate each statistic).
std::vector<BootstrapSummary> run_bootstrap(const LabeledDataset& validation,
                                            const ClassProbabilities& probs,
                                            const LabelSets* sets, LabelerKind kind,
                                            const std::vector<std::function<double(const BootstrapDraw&)>>& stats,
                                            int n_boot, RngSpec spec, double level = 0.95,
                                            bool keep_samples = false);

}  // namespace setlabel
