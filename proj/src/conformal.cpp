#include "setlabel/conformal.hpp"

#include <algorithm>
#include <cmath>

namespace setlabel {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_halves(const std::vector<int>& labels, int k, Rng& rng, bool odd_to_first) {
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    if (y < 1 || y > k) {
      throw LabelOutOfRange("stratified split: label " + std::to_string(y) +
                            " at row " + std::to_string(i));
    }
    by_class[static_cast<std::size_t>(y - 1)].push_back(i);
  }
  std::vector<std::size_t> first, second;
  for (auto& rows : by_class) {
    rng.shuffle(rows);
    std::size_t h = rows.size() / 2;
    if (rows.size() % 2 == 1 && odd_to_first) ++h;
    first.insert(first.end(), rows.begin(), rows.begin() + static_cast<long>(h));
    second.insert(second.end(), rows.begin() + static_cast<long>(h), rows.end());
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {std::move(first), std::move(second)};
}

SplitIndices split_development(const std::vector<int>& labels, int k, Rng& rng) {
  std::vector<long> counts(static_cast<std::size_t>(k), 0);
  for (int y : labels) {
    if (y >= 1 && y <= k) ++counts[static_cast<std::size_t>(y - 1)];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] < 2) {
      throw ClassTooSmall("split_development: class " + std::to_string(c + 1) +
                          " has " + std::to_string(counts[static_cast<std::size_t>(c)]) +
                          " development rows (need >= 2)");
    }
  }
  auto [i1, i2] = stratified_halves(labels, k, rng, /*odd_to_first=*/false);
  return SplitIndices{std::move(i1), std::move(i2)};
}

ThresholdVector estimate_thresholds(const ClassProbabilities& probs_i2,
                                    const std::vector<int>& labels_i2,
                                    const std::vector<double>& alpha) {
  const int k = probs_i2.k();
  if (static_cast<long>(labels_i2.size()) != probs_i2.n()) {
    throw DimensionMismatch("estimate_thresholds: labels length != probability rows");
  }
  if (static_cast<int>(alpha.size()) != k) {
    throw DimensionMismatch("estimate_thresholds: alpha length != class count");
  }
  for (double a : alpha) {
    if (!(a > 0.0 && a < 1.0)) {
      throw DimensionMismatch("estimate_thresholds: alpha must lie in (0,1)");
    }
  }

  ThresholdVector tv;
  tv.alpha = alpha;
  for (int c = 1; c <= k; ++c) {
    std::vector<double> own;
    for (std::size_t i = 0; i < labels_i2.size(); ++i) {
      if (labels_i2[i] == c) own.push_back(probs_i2.p(static_cast<long>(i), c - 1));
    }
    if (own.empty()) {
      throw EmptyCalibrationClass("estimate_thresholds: class " + std::to_string(c) +
                                  " absent from the calibration half");
    }
    std::sort(own.begin(), own.end());
    const auto m = static_cast<double>(own.size());
    const double bound = (m + 1.0) * alpha[static_cast<std::size_t>(c - 1)] - 1.0;
    double threshold = own.back();
    for (std::size_t i = 0; i < own.size(); ++i) {
      // #{j : P_j <= own[i]} on the sorted vector, robust to ties.
      const auto cnt = static_cast<double>(
          std::upper_bound(own.begin(), own.end(), own[i]) - own.begin());
      if (cnt > bound) {
        threshold = own[i];
        break;
      }
    }
    tv.t.push_back(threshold);
    tv.calib_counts.push_back(static_cast<long>(own.size()));
  }
  return tv;
}

LabelSets build_label_sets(const ClassProbabilities& probs, const ThresholdVector& tv) {
  const int k = probs.k();
  if (static_cast<int>(tv.t.size()) != k) {
    throw DimensionMismatch("build_label_sets: threshold length != class count");
  }
  LabelSets sets;
  sets.k = k;
  sets.mask.reserve(static_cast<std::size_t>(probs.n()));
  for (long i = 0; i < probs.n(); ++i) {
    LabelSetMask m = 0;
    for (int c = 0; c < k; ++c) {
      if (probs.p(i, c) >= tv.t[static_cast<std::size_t>(c)]) m |= (1u << c);
    }
    sets.mask.push_back(m);
  }
  return sets;
}

LabelSets singleton_sets(const std::vector<int>& labels, int k) {
  LabelSets sets;
  sets.k = k;
  sets.mask.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    if (y < 1 || y > k) {
      throw LabelOutOfRange("singleton_sets: label " + std::to_string(y) +
                            " at row " + std::to_string(i));
    }
    sets.mask.push_back(1u << (y - 1));
  }
  return sets;
}

std::vector<double> class_coverage(const LabelSets& sets, const std::vector<int>& labels) {
  if (labels.size() != sets.size()) {
    throw DimensionMismatch("class_coverage: labels length != set count");
  }
  const int k = sets.k;
  std::vector<long> denom(static_cast<std::size_t>(k), 0);
  std::vector<long> numer(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    if (y < 1 || y > k) {
      throw LabelOutOfRange("class_coverage: label " + std::to_string(y) +
                            " at row " + std::to_string(i));
    }
    ++denom[static_cast<std::size_t>(y - 1)];
    if (sets.contains(i, y)) ++numer[static_cast<std::size_t>(y - 1)];
  }
  std::vector<double> out;
  for (int c = 0; c < k; ++c) {
    if (denom[static_cast<std::size_t>(c)] == 0) {
      throw EmptyClass("class_coverage: class " + std::to_string(c + 1) + " has no rows");
    }
    out.push_back(static_cast<double>(numer[static_cast<std::size_t>(c)]) /
                  static_cast<double>(denom[static_cast<std::size_t>(c)]));
  }
  return out;
}

AmbiguityProfile ambiguity_profile(const LabelSets& sets, const std::vector<int>& labels) {
  if (labels.size() != sets.size()) {
    throw DimensionMismatch("ambiguity_profile: labels length != set count");
  }
  const int k = sets.k;
  AmbiguityProfile prof;
  prof.k = k;
  prof.overall.assign(static_cast<std::size_t>(k + 1), 0);
  prof.by_class.assign(static_cast<std::size_t>(k),
                       std::vector<long>(static_cast<std::size_t>(k + 1), 0));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const int card = sets.cardinality(i);
    const int y = labels[i];
    if (y < 1 || y > k) {
      throw LabelOutOfRange("ambiguity_profile: label " + std::to_string(y) +
                            " at row " + std::to_string(i));
    }
    ++prof.overall[static_cast<std::size_t>(card)];
    ++prof.by_class[static_cast<std::size_t>(y - 1)][static_cast<std::size_t>(card)];
  }
  return prof;
}

}  // namespace setlabel
