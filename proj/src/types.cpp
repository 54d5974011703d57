#include "setlabel/types.hpp"

#include <cmath>

namespace setlabel {

FeatureMatrix select_columns(const FeatureMatrix& X, const std::vector<int>& cols_1based) {
  FeatureMatrix out;
  out.values.resize(X.n(), static_cast<long>(cols_1based.size()));
  for (std::size_t j = 0; j < cols_1based.size(); ++j) {
    const int c = cols_1based[j];
    if (c < 1 || c > X.p()) {
      throw DimensionMismatch("select_columns: column id " + std::to_string(c) +
                              " outside 1.." + std::to_string(X.p()));
    }
    out.values.col(static_cast<long>(j)) = X.values.col(c - 1);
    if (!X.col_kinds.empty()) out.col_kinds.push_back(X.col_kinds[c - 1]);
  }
  return out;
}

LabeledDataset select_rows(const LabeledDataset& ds, const std::vector<std::size_t>& rows) {
  LabeledDataset out;
  out.features.col_kinds = ds.features.col_kinds;
  out.features.values.resize(static_cast<long>(rows.size()), ds.features.p());
  out.labels.reserve(rows.size());
  if (ds.survival) out.survival = SurvivalData{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    if (r >= static_cast<std::size_t>(ds.n())) {
      throw DimensionMismatch("select_rows: row index " + std::to_string(r) +
                              " outside dataset of " + std::to_string(ds.n()) + " rows");
    }
    out.features.values.row(static_cast<long>(i)) = ds.features.values.row(static_cast<long>(r));
    out.labels.push_back(ds.labels[r]);
    if (ds.survival) {
      out.survival->time.push_back(ds.survival->time[r]);
      out.survival->event.push_back(ds.survival->event[r]);
    }
  }
  return out;
}

std::vector<std::string> validate_dataset(const LabeledDataset& ds, const LabelSpace& space) {
  std::vector<std::string> out;
  const long n = ds.features.n();
  const long p = ds.features.p();

  if (space.k < 2) out.push_back("label space: k must be >= 2");
  if (static_cast<int>(space.names.size()) != space.k) {
    out.push_back("label space: names length != k");
  }
  if (static_cast<long>(ds.labels.size()) != n) {
    out.push_back("labels: length " + std::to_string(ds.labels.size()) +
                  " != row count " + std::to_string(n));
  }
  if (!ds.features.col_kinds.empty() &&
      static_cast<long>(ds.features.col_kinds.size()) != p) {
    out.push_back("features: col_kinds length != column count");
  }

  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < p; ++j) {
      const double v = ds.features.values(i, j);
      if (!std::isfinite(v)) {
        out.push_back("features: non-finite value at row " + std::to_string(i) +
                      " col " + std::to_string(j));
        continue;
      }
      if (static_cast<long>(ds.features.col_kinds.size()) == p) {
        const ColKind kind = ds.features.col_kinds[static_cast<std::size_t>(j)];
        if (kind == ColKind::binary && v != 0.0 && v != 1.0) {
          out.push_back("features: binary col " + std::to_string(j) +
                        " holds " + std::to_string(v) + " at row " + std::to_string(i));
        }
        if (kind == ColKind::count && (v < 0.0 || v != std::floor(v))) {
          out.push_back("features: count col " + std::to_string(j) +
                        " holds " + std::to_string(v) + " at row " + std::to_string(i));
        }
      }
    }
  }

  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    const int y = ds.labels[i];
    if (y < 1 || y > space.k) {
      out.push_back("labels: value " + std::to_string(y) + " at row " +
                    std::to_string(i) + " outside 1.." + std::to_string(space.k));
    }
  }

  if (ds.survival) {
    const SurvivalData& sd = *ds.survival;
    if (static_cast<long>(sd.time.size()) != n || sd.event.size() != sd.time.size()) {
      out.push_back("survival: time/event lengths inconsistent with dataset");
    }
    for (std::size_t i = 0; i < sd.time.size(); ++i) {
      if (!std::isfinite(sd.time[i]) || sd.time[i] < 0.0) {
        out.push_back("survival: bad time " + std::to_string(sd.time[i]) +
                      " at row " + std::to_string(i));
      }
    }
  }
  return out;
}

void validate_probabilities(const ClassProbabilities& probs, double tol) {
  for (long i = 0; i < probs.n(); ++i) {
    double sum = 0.0;
    for (int c = 0; c < probs.k(); ++c) {
      const double v = probs.p(i, c);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw RowSumError("probability row " + std::to_string(i) +
                          " entry outside [0,1]: " + std::to_string(v));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw RowSumError("probability row " + std::to_string(i) + " sums to " +
                        std::to_string(sum) + " (tolerance " + std::to_string(tol) + ")");
    }
  }
}

}  // namespace setlabel
