#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "setlabel/conformal.hpp"
#include "setlabel/labeling.hpp"
#include "setlabel/metrics.hpp"
#include "setlabel/rng.hpp"
#include "setlabel/types.hpp"

using namespace setlabel;

namespace {

std::vector<int> shuffled_labels(const std::vector<long>& counts, std::uint64_t seed) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    labels.insert(labels.end(), static_cast<std::size_t>(counts[c]), static_cast<int>(c) + 1);
  }
  Rng rng(RngSpec{seed, 99});
  rng.shuffle(labels);
  return labels;
}

// Random rows on the simplex via normalized exponentials.
ClassProbabilities random_simplex(long n, int k, Rng& rng) {
  ClassProbabilities probs;
  probs.p.resize(n, k);
  for (long i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int c = 0; c < k; ++c) {
      probs.p(i, c) = -std::log(rng.uniform01_open0());
      sum += probs.p(i, c);
    }
    probs.p.row(i) /= sum;
  }
  return probs;
}

}  // namespace

TEST_CASE("development split halves every class with the odd row calibrating") {
  const auto labels = shuffled_labels({370, 490, 141}, 41);
  Rng rng(RngSpec{42, 0});
  const SplitIndices split = split_development(labels, 3, rng);
  CHECK(split.i1.size() + split.i2.size() == labels.size());

  std::vector<long> c1(3, 0), c2(3, 0);
  for (std::size_t i : split.i1) c1[static_cast<std::size_t>(labels[i] - 1)]++;
  for (std::size_t i : split.i2) c2[static_cast<std::size_t>(labels[i] - 1)]++;
  CHECK(c1 == std::vector<long>{185, 245, 70});
  CHECK(c2 == std::vector<long>{185, 245, 71});  // odd row goes to calibration

  CHECK(std::is_sorted(split.i1.begin(), split.i1.end()));
  CHECK(std::is_sorted(split.i2.begin(), split.i2.end()));
  std::set<std::size_t> seen(split.i1.begin(), split.i1.end());
  for (std::size_t i : split.i2) CHECK(seen.insert(i).second);  // disjoint
  CHECK(seen.size() == labels.size());                          // exhaustive
}

TEST_CASE("development split is deterministic in the stream spec") {
  const auto labels = shuffled_labels({20, 30, 10}, 7);
  Rng a(RngSpec{9, 3});
  Rng b(RngSpec{9, 3});
  const SplitIndices sa = split_development(labels, 3, a);
  const SplitIndices sb = split_development(labels, 3, b);
  CHECK(sa.i1 == sb.i1);
  CHECK(sa.i2 == sb.i2);
  Rng c(RngSpec{10, 3});
  const SplitIndices sc = split_development(labels, 3, c);
  CHECK(sa.i1 != sc.i1);  // different seed, different halves
}

TEST_CASE("classes below two rows cannot be split for calibration") {
  Rng rng(RngSpec{1, 0});
  std::vector<int> labels = {1, 1, 2, 3, 3};
  CHECK_THROWS_AS(split_development(labels, 3, rng), ClassTooSmall);
}

TEST_CASE("cohort halving tolerates singleton classes") {
  std::vector<int> labels = {1, 1, 2, 3, 3, 3};
  Rng r1(RngSpec{2, 0});
  const auto [dev, val] = stratified_halves(labels, 3, r1, true);
  CHECK(dev.size() + val.size() == labels.size());
  long dev2 = 0, val2 = 0;
  for (std::size_t i : dev) dev2 += labels[i] == 2;
  for (std::size_t i : val) val2 += labels[i] == 2;
  CHECK(dev2 == 1);  // odd_to_first sends the lone row to the first half
  CHECK(val2 == 0);
  Rng r2(RngSpec{2, 0});
  const auto [dev_b, val_b] = stratified_halves(labels, 3, r2, false);
  long devb2 = 0;
  for (std::size_t i : dev_b) devb2 += labels[i] == 2;
  CHECK(devb2 == 0);
  CHECK(dev_b.size() + val_b.size() == labels.size());
}

TEST_CASE("threshold is the smallest calibration probability meeting the count rule") {
  // m=3 per class, (m+1)*0.1 - 1 < 0: every candidate qualifies, so the
  // threshold is the minimum own-class probability.
  ClassProbabilities probs;
  probs.p = Eigen::MatrixXd(6, 2);
  probs.p << 0.2, 0.8, 0.5, 0.5, 0.9, 0.1, 0.3, 0.7, 0.4, 0.6, 0.1, 0.9;
  const ThresholdVector tv =
      estimate_thresholds(probs, {1, 1, 1, 2, 2, 2}, {0.1, 0.1});
  CHECK(tv.t[0] == 0.2);
  CHECK(tv.t[1] == 0.6);
  CHECK(tv.calib_counts == std::vector<long>{3, 3});
  CHECK(tv.alpha == std::vector<double>{0.1, 0.1});
}

TEST_CASE("nineteen calibration rows at alpha 0.1 take the second smallest") {
  ClassProbabilities probs;
  probs.p = Eigen::MatrixXd(19, 2);
  std::vector<int> labels(19, 1);
  for (int i = 0; i < 19; ++i) {
    probs.p(i, 0) = (i + 1) / 20.0;  // 0.05, 0.10, ..., 0.95
    probs.p(i, 1) = 1.0 - probs.p(i, 0);
  }
  labels.back() = 2;  // keep class 2 nonempty
  // class 1 has m=18 rows 0.05..0.90: (19)(0.1)-1 = 0.9, need count > 0.9 i.e. >= 1.
  const ThresholdVector tv = estimate_thresholds(probs, labels, {0.1, 0.5});
  CHECK(tv.t[0] == 0.05);

  // Raise alpha so two rows must sit at or below the cutoff.
  const ThresholdVector tv2 = estimate_thresholds(probs, labels, {0.11, 0.5});
  // (19)(0.11)-1 = 1.09: need count >= 2, so the second smallest 0.10 is the cutoff.
  CHECK(tv2.t[0] == 0.10);
}

TEST_CASE("tied calibration probabilities count non-strictly") {
  ClassProbabilities probs;
  probs.p = Eigen::MatrixXd(6, 2);
  probs.p << 0.3, 0.7, 0.3, 0.7, 0.3, 0.7, 0.8, 0.2, 0.5, 0.5, 0.6, 0.4;
  const std::vector<int> labels = {1, 1, 1, 1, 2, 2};
  // class 1: m=4, (5)(0.45)-1 = 1.25. At v=0.3 the tie gives count 3 > 1.25,
  // so the threshold is the tied value itself, not the next distinct one.
  const ThresholdVector tv = estimate_thresholds(probs, labels, {0.45, 0.45});
  CHECK(tv.t[0] == 0.3);
}

TEST_CASE("threshold estimation validates its inputs") {
  ClassProbabilities probs;
  probs.p = Eigen::MatrixXd(4, 2);
  probs.p << 0.2, 0.8, 0.3, 0.7, 0.6, 0.4, 0.7, 0.3;
  CHECK_THROWS_AS(estimate_thresholds(probs, {1, 1, 1, 1}, {0.1, 0.1}),
                  EmptyCalibrationClass);
  CHECK_THROWS_AS(estimate_thresholds(probs, {1, 1, 2, 2}, {0.0, 0.1}),
                  DimensionMismatch);
  CHECK_THROWS_AS(estimate_thresholds(probs, {1, 1, 2, 2}, {0.1, 1.0}),
                  DimensionMismatch);
  CHECK_THROWS_AS(estimate_thresholds(probs, {1, 1, 2, 2}, {0.1}),
                  DimensionMismatch);
}

TEST_CASE("set membership is non-strict at the cutoff") {
  ThresholdVector tv;
  tv.t = {0.4, 0.3, 0.2};
  tv.alpha = {0.1, 0.1, 0.1};
  tv.calib_counts = {10, 10, 10};
  ClassProbabilities probs;
  probs.p = Eigen::MatrixXd(3, 3);
  probs.p << 0.40, 0.25, 0.35,  // classes 1 and 3: 0.40 on the boundary
      0.39, 0.29, 0.32,         // class 3 only
      0.10, 0.30, 0.60;         // classes 2 (boundary) and 3
  const LabelSets sets = build_label_sets(probs, tv);
  CHECK(sets.mask[0] == 0b101u);
  CHECK(sets.mask[1] == 0b100u);
  CHECK(sets.mask[2] == 0b110u);
}

TEST_CASE("impossible thresholds produce null sets") {
  ThresholdVector tv;
  tv.t = {0.5, 0.5, 0.5};
  tv.alpha = {0.1, 0.1, 0.1};
  tv.calib_counts = {10, 10, 10};
  ClassProbabilities probs;
  probs.p = Eigen::MatrixXd(1, 3);
  probs.p << 0.34, 0.33, 0.33;
  const LabelSets sets = build_label_sets(probs, tv);
  CHECK(sets.mask[0] == 0u);
  CHECK(sets.cardinality(0) == 0);
}

TEST_CASE("coverage of all-class sets is one; empty classes are rejected") {
  LabelSets sets;
  sets.k = 3;
  sets.mask = {0b111, 0b111, 0b111, 0b111};
  const auto cov = class_coverage(sets, {1, 2, 3, 1});
  CHECK(cov == std::vector<double>{1.0, 1.0, 1.0});
  CHECK_THROWS_AS(class_coverage(sets, {1, 1, 1, 1}), EmptyClass);
}

TEST_CASE("singleton-set coverage equals argmax sensitivity") {
  Rng rng(RngSpec{51, 0});
  const ClassProbabilities probs = random_simplex(300, 3, rng);
  std::vector<int> truth;
  for (int i = 0; i < 300; ++i) truth.push_back(static_cast<int>(rng.below(3)) + 1);
  const std::vector<int> am = argmax_label(probs);
  const auto cov = class_coverage(singleton_sets(am, 3), truth);
  const ClassMetrics m = class_metrics(confusion_counts(am, truth, 3));
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(cov[c] == doctest::Approx(m.sensitivity[c]).epsilon(1e-12));
  }
}

TEST_CASE("ambiguity profile counts cardinalities overall and per class") {
  LabelSets sets;
  sets.k = 3;
  sets.mask = {0b000, 0b001, 0b011, 0b111, 0b010, 0b110};
  const std::vector<int> truth = {1, 1, 2, 2, 3, 3};
  const AmbiguityProfile prof = ambiguity_profile(sets, truth);
  CHECK(prof.k == 3);
  REQUIRE(prof.overall.size() == 4);
  CHECK(prof.overall == std::vector<long>{1, 2, 2, 1});
  REQUIRE(prof.by_class.size() == 3);
  CHECK(prof.by_class[0] == std::vector<long>{1, 1, 0, 0});
  CHECK(prof.by_class[1] == std::vector<long>{0, 0, 1, 1});
  CHECK(prof.by_class[2] == std::vector<long>{0, 1, 1, 0});
  long total = 0;
  for (long c : prof.overall) total += c;
  CHECK(total == 6);
}

TEST_CASE("calibration coverage guarantee holds on every random instance") {
  Rng rng(RngSpec{52, 0});
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(3));
    const long n = 4L * k + static_cast<long>(rng.below(80));
    ClassProbabilities probs = random_simplex(n, k, rng);
    std::vector<int> labels;
    for (long i = 0; i < n; ++i) labels.push_back(static_cast<int>(rng.below(k)) + 1);
    for (int c = 1; c <= k; ++c) labels[static_cast<std::size_t>(c - 1)] = c;  // nonempty
    std::vector<double> alpha;
    for (int c = 0; c < k; ++c) alpha.push_back(rng.uniform(0.05, 0.5));
    const ThresholdVector tv = estimate_thresholds(probs, labels, alpha);
    const auto cov = class_coverage(build_label_sets(probs, tv), labels);
    for (int c = 0; c < k; ++c) {
      CHECK(cov[static_cast<std::size_t>(c)] >=
            1.0 - alpha[static_cast<std::size_t>(c)] - 1e-12);
    }
  }
}

TEST_CASE("raising alpha weakly raises thresholds and shrinks sets") {
  Rng rng(RngSpec{53, 0});
  const ClassProbabilities probs = random_simplex(120, 3, rng);
  std::vector<int> labels;
  for (int i = 0; i < 120; ++i) labels.push_back(static_cast<int>(rng.below(3)) + 1);
  for (int c = 1; c <= 3; ++c) labels[static_cast<std::size_t>(c - 1)] = c;
  const ThresholdVector lo = estimate_thresholds(probs, labels, {0.05, 0.05, 0.05});
  const ThresholdVector hi = estimate_thresholds(probs, labels, {0.3, 0.3, 0.3});
  for (std::size_t c = 0; c < 3; ++c) CHECK(lo.t[c] <= hi.t[c]);
  const LabelSets big = build_label_sets(probs, lo);
  const LabelSets small = build_label_sets(probs, hi);
  for (std::size_t i = 0; i < big.size(); ++i) {
    CHECK((small.mask[i] & ~big.mask[i]) == 0u);  // small subset of big
  }
}
