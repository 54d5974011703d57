#include "setlabel/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace setlabel {

std::vector<std::size_t> resample_indices(std::size_t n, Rng& rng) {
  if (n < 1) throw DimensionMismatch("resample_indices: n must be >= 1");
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(static_cast<std::size_t>(rng.below(n)));
  }
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 0) throw TooFewSamples("quantile_sorted: empty sample");
  if (n == 1) return sorted[0];
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - std::floor(h);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::pair<double, double> percentile_interval(std::vector<double> samples, double level) {
  if (samples.size() < 2) {
    throw TooFewSamples("percentile_interval: need >= 2 samples, got " +
                        std::to_string(samples.size()));
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw DimensionMismatch("percentile_interval: level must lie in (0,1)");
  }
  std::sort(samples.begin(), samples.end());
  const double tail = (1.0 - level) / 2.0;
  return {quantile_sorted(samples, tail), quantile_sorted(samples, 1.0 - tail)};
}

std::vector<BootstrapSummary> run_bootstrap_vec(std::size_t n_rows, const LabelSets* sets,
                                                const std::vector<int>& argmax_labels,
                                                LabelerKind kind, std::size_t n_stats,
                                                const StatVecFn& eval, int n_boot,
                                                RngSpec spec, double level,
                                                bool keep_samples) {
  if (n_boot < 2) throw TooFewSamples("run_bootstrap: n_boot must be >= 2");
  if (kind == LabelerKind::weighted_set_sampler && sets == nullptr) {
    throw DimensionMismatch("run_bootstrap: weighted labeler needs label sets");
  }
  if (kind == LabelerKind::naive_argmax && argmax_labels.size() != n_rows) {
    throw DimensionMismatch("run_bootstrap: argmax labels length != row count");
  }

  // samples[s][b]: statistic s on resample b (NaN = undefined).
  std::vector<std::vector<double>> samples(
      n_stats, std::vector<double>(static_cast<std::size_t>(n_boot)));
  std::vector<double> stat_buf(n_stats);
  std::vector<int> labels(n_rows);

  for (int b = 0; b < n_boot; ++b) {
    Rng rng(spec.child(static_cast<std::uint64_t>(b)));
    const std::vector<std::size_t> idx = resample_indices(n_rows, rng);
    // One label per drawn position, RNG consumed in position order.
    for (std::size_t i = 0; i < n_rows; ++i) {
      labels[i] = kind == LabelerKind::naive_argmax
                      ? argmax_labels[idx[i]]
                      : sample_label(sets->mask[idx[i]], sets->k, rng);
    }
    std::fill(stat_buf.begin(), stat_buf.end(),
              std::numeric_limits<double>::quiet_NaN());
    eval(BootstrapDraw{idx, labels}, std::span<double>(stat_buf));
    for (std::size_t s = 0; s < n_stats; ++s) {
      samples[s][static_cast<std::size_t>(b)] = stat_buf[s];
    }
  }

  std::vector<BootstrapSummary> out(n_stats);
  for (std::size_t s = 0; s < n_stats; ++s) {
    BootstrapSummary& sum = out[s];
    sum.n_boot = n_boot;
    std::vector<double> defined;
    defined.reserve(static_cast<std::size_t>(n_boot));
    for (double v : samples[s]) {
      if (!std::isnan(v)) defined.push_back(v);
    }
    sum.defined = static_cast<long>(defined.size());
    if (defined.empty()) {
      sum.mean = sum.lo = sum.hi = std::numeric_limits<double>::quiet_NaN();
    } else {
      double m = 0.0;
      for (double v : defined) m += v;
      sum.mean = m / static_cast<double>(defined.size());
      if (defined.size() >= 2) {
        std::tie(sum.lo, sum.hi) = percentile_interval(defined, level);
      } else {
        sum.lo = sum.hi = defined[0];
      }
    }
    if (keep_samples) sum.samples = std::move(samples[s]);
  }
  return out;
}

std::vector<BootstrapSummary> run_bootstrap(const LabeledDataset& validation,
                                            const ClassProbabilities& probs,
                                            const LabelSets* sets, LabelerKind kind,
                                            const std::vector<std::function<double(const BootstrapDraw&)>>& stats,
                                            int n_boot, RngSpec spec, double level,
                                            bool keep_samples) {
  const auto n = static_cast<std::size_t>(validation.n());
  std::vector<int> am;
  if (kind == LabelerKind::naive_argmax) am = argmax_label(probs);
  return run_bootstrap_vec(
      n, sets, am, kind, stats.size(),
      [&stats](const BootstrapDraw& draw, std::span<double> out) {
        for (std::size_t s = 0; s < stats.size(); ++s) out[s] = stats[s](draw);
      },
      n_boot, spec, level, keep_samples);
}

}  // namespace setlabel
