#include "setlabel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace setlabel {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// tp/(tp+fn) style ratio; NaN when the denominator is zero.
double safe_ratio(long num, long den) {
  return den == 0 ? kNaN : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionCounts confusion_counts(const std::vector<int>& pred,
                                 const std::vector<int>& truth, int k) {
  if (pred.size() != truth.size()) {
    throw DimensionMismatch("confusion_counts: pred length " + std::to_string(pred.size()) +
                            " != truth length " + std::to_string(truth.size()));
  }
  auto check = [k](int y, const char* which, std::size_t i) {
    if (y < 1 || y > k) {
      throw LabelOutOfRange(std::string("confusion_counts: ") + which + " label " +
                            std::to_string(y) + " at row " + std::to_string(i) +
                            " outside 1.." + std::to_string(k));
    }
  };
  ConfusionCounts cc;
  cc.k = k;
  cc.n = static_cast<long>(pred.size());
  cc.tp.assign(static_cast<std::size_t>(k), 0);
  cc.tn.assign(static_cast<std::size_t>(k), 0);
  cc.fp.assign(static_cast<std::size_t>(k), 0);
  cc.fn.assign(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    check(pred[i], "predicted", i);
    check(truth[i], "true", i);
    for (int c = 1; c <= k; ++c) {
      const bool p = pred[i] == c;
      const bool t = truth[i] == c;
      auto idx = static_cast<std::size_t>(c - 1);
      if (p && t) ++cc.tp[idx];
      else if (p && !t) ++cc.fp[idx];
      else if (!p && t) ++cc.fn[idx];
      else ++cc.tn[idx];
    }
  }
  return cc;
}

double nan_mean(const std::vector<double>& v) {
  double sum = 0.0;
  long defined = 0;
  for (double x : v) {
    if (!std::isnan(x)) {
      sum += x;
      ++defined;
    }
  }
  return defined == 0 ? kNaN : sum / static_cast<double>(defined);
}

ClassMetrics class_metrics(const ConfusionCounts& cc) {
  ClassMetrics m;
  for (int c = 0; c < cc.k; ++c) {
    auto i = static_cast<std::size_t>(c);
    m.accuracy.push_back(safe_ratio(cc.tp[i] + cc.tn[i], cc.n));
    m.sensitivity.push_back(safe_ratio(cc.tp[i], cc.tp[i] + cc.fn[i]));
    m.specificity.push_back(safe_ratio(cc.tn[i], cc.tn[i] + cc.fp[i]));
    m.ppv.push_back(safe_ratio(cc.tp[i], cc.tp[i] + cc.fp[i]));
  }
  for (const auto* v : {&m.accuracy, &m.sensitivity, &m.specificity, &m.ppv}) {
    m.undefined_count += static_cast<int>(
        std::count_if(v->begin(), v->end(), [](double x) { return std::isnan(x); }));
  }
  m.macro_accuracy = nan_mean(m.accuracy);
  m.macro_sensitivity = nan_mean(m.sensitivity);
  m.macro_specificity = nan_mean(m.specificity);
  m.macro_ppv = nan_mean(m.ppv);
  return m;
}

std::vector<CalibrationBin> calibration_bins(const ClassProbabilities& probs,
                                             const std::vector<int>& truth,
                                             int cls, int n_bins) {
  if (n_bins < 1) throw DimensionMismatch("calibration_bins: n_bins must be >= 1");
  if (static_cast<long>(truth.size()) != probs.n()) {
    throw DimensionMismatch("calibration_bins: truth length != probability rows");
  }
  const long n = probs.n();
  std::vector<long> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0L);
  std::stable_sort(order.begin(), order.end(), [&](long a, long b) {
    return probs.p(a, cls - 1) < probs.p(b, cls - 1);
  });

  const long bins = std::min<long>(n_bins, std::max<long>(n, 1));
  const long base = n / bins;
  const long rem = n % bins;
  std::vector<CalibrationBin> out;
  long pos = 0;
  for (long b = 0; b < bins; ++b) {
    const long size = base + (b < rem ? 1 : 0);
    if (size == 0) continue;
    CalibrationBin bin;
    bin.count = size;
    for (long t = 0; t < size; ++t) {
      const long row = order[static_cast<std::size_t>(pos + t)];
      bin.mean_predicted += probs.p(row, cls - 1);
      bin.observed += truth[static_cast<std::size_t>(row)] == cls ? 1.0 : 0.0;
    }
    bin.mean_predicted /= static_cast<double>(size);
    bin.observed /= static_cast<double>(size);
    out.push_back(bin);
    pos += size;
  }
  return out;
}

}  // namespace setlabel
