#pragma once
// Single-label assignment strategies: deterministic argmax and uniform
// sampling from label sets.
#include <vector>

#include "setlabel/rng.hpp"
#include "setlabel/types.hpp"

namespace setlabel {

enum class LabelerKind { naive_argmax, weighted_set_sampler };

// Highest-probability class per row; ties broken by lowest class index.
// Accepts any score matrix (positive rescaling of a row cannot change the
// result), so callers may pass unnormalized scores.
inline std::vector<int> argmax_label(const Eigen::MatrixXd& scores) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(scores.rows()));
  for (long i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < scores.cols(); ++c) {
      if (scores(i, c) > scores(i, best)) best = c;
    }
    out.push_back(best + 1);
  }
  return out;
}

inline std::vector<int> argmax_label(const ClassProbabilities& probs) {
  return argmax_label(probs.p);
}

// Uniform draw over the members of one label set; a null set falls back to
// uniform over all k classes. Consumes exactly one RNG draw.
inline int sample_label(LabelSetMask mask, int k, Rng& rng) {
  const int card = std::popcount(mask);
  if (card == 0) return static_cast<int>(rng.below(static_cast<std::uint64_t>(k))) + 1;
  int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(card)));
  for (int c = 0; c < k; ++c) {
    if ((mask >> c) & 1u) {
      if (pick == 0) return c + 1;
      --pick;
    }
  }
  return k;  // unreachable: popcount bounds the scan
}

// One draw per row, consumed in row order (reproducibility contract).
inline std::vector<int> sample_labels(const LabelSets& sets, Rng& rng) {
  std::vector<int> out;
  out.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    out.push_back(sample_label(sets.mask[i], sets.k, rng));
  }
  return out;
}

}  // namespace setlabel
