#pragma once
// Split-conformal machinery: stratified development split, per-class
// thresholds, label-set construction, coverage and ambiguity diagnostics.
#include <vector>

#include "setlabel/rng.hpp"
#include "setlabel/types.hpp"

namespace setlabel {

struct SplitIndices {
  std::vector<std::size_t> i1;  // fitting half
  std::vector<std::size_t> i2;  // calibration half
};

// Stratified random halves of `labels` (1..k); per-class counts differ by at
// most one (the calibration half takes the odd row). Indices are returned
// sorted ascending. Throws ClassTooSmall when a class has < 2 rows.
SplitIndices split_development(const std::vector<int>& labels, int k, Rng& rng);

// Same stratified halving but tolerating singleton classes (used for the
// development/validation cohort split where a lone row still belongs
// somewhere); odd_to_first picks which half takes a class's odd row.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_halves(const std::vector<int>& labels, int k, Rng& rng, bool odd_to_first);

struct ThresholdVector {
  std::vector<double> t;        // per-class cutoffs in [0,1]
  std::vector<double> alpha;    // per-class error levels
  std::vector<long> calib_counts;
};

// Per class y: the smallest own-class calibration probability v such that
// #{ j in calibration class y : P_j <= v } > (m+1)*alpha_y - 1, where m is
// the class-y calibration count. Ties use <= exactly as displayed; the
// threshold is the tied value itself. Guarantees calibration-half coverage
// >= 1 - alpha_y. Throws EmptyCalibrationClass when a class is absent.
ThresholdVector estimate_thresholds(const ClassProbabilities& probs_i2,
                                    const std::vector<int>& labels_i2,
                                    const std::vector<double>& alpha);

// Label y enters row i's set iff probs(i, y) >= t_y (non-strict).
LabelSets build_label_sets(const ClassProbabilities& probs, const ThresholdVector& tv);

// Singleton sets from externally assigned single labels (e.g. argmax), so the
// coverage/ambiguity diagnostics apply to naive labeling too.
LabelSets singleton_sets(const std::vector<int>& labels, int k);

// coverage_y = fraction of true-class-y rows whose set contains y.
// Throws EmptyClass when a class has no rows.
std::vector<double> class_coverage(const LabelSets& sets, const std::vector<int>& labels);

struct AmbiguityProfile {
  int k = 0;
  std::vector<long> overall;               // counts by cardinality 0..k
  std::vector<std::vector<long>> by_class; // [class-1][cardinality]
};

AmbiguityProfile ambiguity_profile(const LabelSets& sets, const std::vector<int>& labels);

}  // namespace setlabel
