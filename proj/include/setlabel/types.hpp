#pragma once
// Domain types shared by every module, plus the typed errors thrown across
// the library. All containers are plain values: immutable-by-convention after
// construction and safe to share across threads.
#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace setlabel {

// ---- errors ---------------------------------------------------------------
struct EmptyClass : std::runtime_error { using std::runtime_error::runtime_error; };
struct EmptyCalibrationClass : std::runtime_error { using std::runtime_error::runtime_error; };
struct ClassTooSmall : std::runtime_error { using std::runtime_error::runtime_error; };
struct LabelOutOfRange : std::runtime_error { using std::runtime_error::runtime_error; };
struct DimensionMismatch : std::runtime_error { using std::runtime_error::runtime_error; };
struct NonConvergence : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegenerateDesign : std::runtime_error { using std::runtime_error::runtime_error; };
struct ParseError : std::runtime_error { using std::runtime_error::runtime_error; };
struct RowSumError : std::runtime_error { using std::runtime_error::runtime_error; };
struct EmptyData : std::runtime_error { using std::runtime_error::runtime_error; };
struct TooFewSamples : std::runtime_error { using std::runtime_error::runtime_error; };
struct EmptyStratum : std::runtime_error { using std::runtime_error::runtime_error; };
struct StatisticUndefined : std::runtime_error { using std::runtime_error::runtime_error; };

// ---- label space ----------------------------------------------------------
struct LabelSpace {
  int k = 3;
  std::vector<std::string> names;

  LabelSpace() : LabelSpace(3) {}
  explicit LabelSpace(int k_in) : k(k_in) {
    for (int c = 1; c <= k; ++c) names.push_back(std::to_string(c));
  }
  LabelSpace(int k_in, std::vector<std::string> names_in)
      : k(k_in), names(std::move(names_in)) {}
};

// ---- features -------------------------------------------------------------
enum class ColKind { continuous, binary, count };

struct FeatureMatrix {
  Eigen::MatrixXd values;            // n x p
  std::vector<ColKind> col_kinds;    // length p (continuous if left empty)

  long n() const { return values.rows(); }
  long p() const { return values.cols(); }
};

// Column subset (1-based covariate ids, e.g. a scenario mask).
FeatureMatrix select_columns(const FeatureMatrix& X, const std::vector<int>& cols_1based);

// ---- survival -------------------------------------------------------------
struct SurvivalData {
  std::vector<double> time;          // observed days, >= 0
  std::vector<std::uint8_t> event;   // 1 = event observed, 0 = censored

  std::size_t size() const { return time.size(); }
};

// ---- dataset --------------------------------------------------------------
struct LabeledDataset {
  FeatureMatrix features;
  std::vector<int> labels;           // 1-based class index per row
  std::optional<SurvivalData> survival;

  long n() const { return features.n(); }
};

// Row subset preserving order of `rows`.
LabeledDataset select_rows(const LabeledDataset& ds, const std::vector<std::size_t>& rows);

// Returns a list of human-readable violations; empty iff the dataset
// satisfies every type invariant for the given label space.
std::vector<std::string> validate_dataset(const LabeledDataset& ds, const LabelSpace& space);

// ---- probabilities --------------------------------------------------------
struct ClassProbabilities {
  Eigen::MatrixXd p;                 // n x k, rows on the simplex

  long n() const { return p.rows(); }
  int k() const { return static_cast<int>(p.cols()); }
};

inline constexpr double kRowSumTol = 1e-9;

// Throws RowSumError (naming the first offending row) or ParseError when the
// matrix violates the ClassProbabilities invariants.
void validate_probabilities(const ClassProbabilities& probs, double tol = kRowSumTol);

// ---- label sets -----------------------------------------------------------
// Bit (c-1) set => class c is a member. An all-zero mask is the null set.
using LabelSetMask = std::uint32_t;

struct LabelSets {
  std::vector<LabelSetMask> mask;    // per row
  int k = 0;

  std::size_t size() const { return mask.size(); }
  bool contains(std::size_t i, int cls) const { return (mask[i] >> (cls - 1)) & 1u; }
  int cardinality(std::size_t i) const { return std::popcount(mask[i]); }
};

}  // namespace setlabel
