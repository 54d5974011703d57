#pragma once
// Multiclass evaluation: one-vs-rest confusion counts, the four performance
// measures (accuracy, sensitivity, specificity, PPV) with NaN-aware macro
// averages, and equal-count calibration bin tables.
#include <vector>

#include "setlabel/types.hpp"

namespace setlabel {

struct ConfusionCounts {
  int k = 0;
  long n = 0;
  std::vector<long> tp, tn, fp, fn;  // per class, one-vs-rest
};

// Exact tallies; throws LabelOutOfRange when a label falls outside 1..k.
ConfusionCounts confusion_counts(const std::vector<int>& pred,
                                 const std::vector<int>& truth, int k);

struct ClassMetrics {
  // Per-class values; 0/0 cells are NaN ("undefined") and excluded from the
  // macro means. undefined_count tallies the excluded cells.
  std::vector<double> accuracy, sensitivity, specificity, ppv;
  double macro_accuracy = 0, macro_sensitivity = 0, macro_specificity = 0, macro_ppv = 0;
  int undefined_count = 0;
};

ClassMetrics class_metrics(const ConfusionCounts& cc);

// NaN-aware unweighted mean; returns NaN when nothing is defined.
double nan_mean(const std::vector<double>& v);

struct CalibrationBin {
  double mean_predicted = 0;  // mean predicted class-y probability in the bin
  double observed = 0;        // empirical fraction of true class y
  long count = 0;
};

// Rows sorted ascending by predicted probability for class `cls` (ties by row
// index), partitioned into n_bins equal-count bins (earlier bins take the
// remainder rows).
std::vector<CalibrationBin> calibration_bins(const ClassProbabilities& probs,
                                             const std::vector<int>& truth,
                                             int cls, int n_bins);

}  // namespace setlabel
