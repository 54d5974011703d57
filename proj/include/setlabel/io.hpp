#pragma once
// CSV I/O for datasets and probability matrices.
//
// Dataset format: header row `x1,...,xp,label[,time,event]`; label is the
// 1-based class index, `event` is 0/1. Probability format: header `p1..pK`,
// one row per observation in dataset row order. Plain numeric CSV only (no
// quoting); files written here always round-trip through the readers.
#include <string>

#include "setlabel/types.hpp"

namespace setlabel::io {

LabeledDataset read_dataset(const std::string& path);
void write_dataset(const std::string& path, const LabeledDataset& ds);

// Raw probability matrix read; no validation beyond shape (see
// estimators::ingest_probabilities for the validating entry point).
ClassProbabilities read_probabilities(const std::string& path, int k_expected);
void write_probabilities(const std::string& path, const ClassProbabilities& probs);

// Deterministic float formatting shared by every CSV writer (shortest
// round-trip representation so emitted files are byte-stable).
std::string format_double(double v);

}  // namespace setlabel::io
