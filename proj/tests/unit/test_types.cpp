#include <doctest.h>

#include <cmath>
#include <limits>

#include "setlabel/types.hpp"

using namespace setlabel;

namespace {

LabeledDataset small_dataset() {
  FeatureMatrix fm;
  fm.values = Eigen::MatrixXd(4, 3);
  fm.values << 1.5, 0.0, 2.0,  //
      -0.5, 1.0, 0.0,          //
      2.5, 1.0, 5.0,           //
      0.0, 0.0, 1.0;
  fm.col_kinds = {ColKind::continuous, ColKind::binary, ColKind::count};
  SurvivalData sd;
  sd.time = {10, 20, 30, 40};
  sd.event = {1, 0, 1, 1};
  return LabeledDataset{std::move(fm), {1, 2, 3, 2}, std::move(sd)};
}

}  // namespace

TEST_CASE("well-formed dataset has no violations") {
  CHECK(validate_dataset(small_dataset(), LabelSpace(3)).empty());
}

TEST_CASE("out-of-range label names the row") {
  auto ds = small_dataset();
  ds.labels[2] = 4;
  const auto v = validate_dataset(ds, LabelSpace(3));
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("row 2") != std::string::npos);
  CHECK(v[0].find("4") != std::string::npos);
}

TEST_CASE("non-finite feature is a violation") {
  auto ds = small_dataset();
  ds.features.values(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK(!validate_dataset(ds, LabelSpace(3)).empty());
  ds.features.values(1, 0) = std::numeric_limits<double>::infinity();
  CHECK(!validate_dataset(ds, LabelSpace(3)).empty());
}

TEST_CASE("binary column with a non-binary value is a violation") {
  auto ds = small_dataset();
  ds.features.values(0, 1) = 0.5;
  CHECK(!validate_dataset(ds, LabelSpace(3)).empty());
}

TEST_CASE("count column rejects negatives and non-integers") {
  auto ds = small_dataset();
  ds.features.values(0, 2) = -1.0;
  CHECK(!validate_dataset(ds, LabelSpace(3)).empty());
  ds.features.values(0, 2) = 2.5;
  CHECK(!validate_dataset(ds, LabelSpace(3)).empty());
}

TEST_CASE("survival length mismatch and negative time are violations") {
  auto ds = small_dataset();
  ds.survival->time.pop_back();
  CHECK(!validate_dataset(ds, LabelSpace(3)).empty());
  ds = small_dataset();
  ds.survival->time[0] = -5.0;
  CHECK(!validate_dataset(ds, LabelSpace(3)).empty());
}

TEST_CASE("probability row summing to 0.8 is rejected") {
  ClassProbabilities p;
  p.p = Eigen::MatrixXd(2, 3);
  p.p << 0.3, 0.3, 0.4,  //
      0.3, 0.3, 0.2;     // sums to 0.8
  CHECK_THROWS_AS(validate_probabilities(p), RowSumError);
  try {
    validate_probabilities(p);
  } catch (const RowSumError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

TEST_CASE("valid probabilities pass and entries outside [0,1] fail") {
  ClassProbabilities p;
  p.p = Eigen::MatrixXd(1, 3);
  p.p << 0.2, 0.3, 0.5;
  CHECK_NOTHROW(validate_probabilities(p));
  p.p << 1.2, 0.3, -0.5;  // sums to 1 but leaves [0,1]
  CHECK_THROWS_AS(validate_probabilities(p), RowSumError);
}

TEST_CASE("select_columns uses 1-based ids and keeps kinds") {
  const auto ds = small_dataset();
  const FeatureMatrix sub = select_columns(ds.features, {3, 1});
  REQUIRE(sub.p() == 2);
  CHECK(sub.values(0, 0) == 2.0);   // old column 3
  CHECK(sub.values(0, 1) == 1.5);   // old column 1
  REQUIRE(sub.col_kinds.size() == 2);
  CHECK(sub.col_kinds[0] == ColKind::count);
  CHECK(sub.col_kinds[1] == ColKind::continuous);
  CHECK_THROWS_AS(select_columns(ds.features, {4}), DimensionMismatch);
  CHECK_THROWS_AS(select_columns(ds.features, {0}), DimensionMismatch);
}

TEST_CASE("select_rows preserves order, labels and survival") {
  const auto ds = small_dataset();
  const LabeledDataset sub = select_rows(ds, {2, 0});
  REQUIRE(sub.n() == 2);
  CHECK(sub.labels == std::vector<int>{3, 1});
  CHECK(sub.features.values(0, 0) == 2.5);
  CHECK(sub.features.values(1, 0) == 1.5);
  REQUIRE(sub.survival.has_value());
  CHECK(sub.survival->time == std::vector<double>{30, 10});
  CHECK(sub.survival->event == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("label set masks: membership and cardinality") {
  LabelSets sets;
  sets.k = 3;
  sets.mask = {0b000, 0b001, 0b101, 0b111};
  CHECK(sets.cardinality(0) == 0);
  CHECK(sets.cardinality(1) == 1);
  CHECK(sets.cardinality(2) == 2);
  CHECK(sets.cardinality(3) == 3);
  CHECK(sets.contains(2, 1));
  CHECK(!sets.contains(2, 2));
  CHECK(sets.contains(2, 3));
  CHECK(!sets.contains(0, 1));
}

TEST_CASE("label space defaults to numeric names") {
  const LabelSpace s(3);
  CHECK(s.names == std::vector<std::string>{"1", "2", "3"});
}
