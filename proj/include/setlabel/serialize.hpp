#pragma once
// JSON (de)serialization for models, thresholds and repetition reports, plus
// the key-value config sidecar. JSON schemas carry schema_version = 1; NaN
// round-trips as null.
#include <string>

#include "setlabel/conformal.hpp"
#include "setlabel/estimators.hpp"
#include "setlabel/pipeline.hpp"

namespace setlabel {

void save_model(const std::string& path, const MultinomialModel& model);
MultinomialModel load_model(const std::string& path);

void save_thresholds(const std::string& path, const ThresholdVector& tv);
ThresholdVector load_thresholds(const std::string& path);

// Full report: config, per-repetition rows, and aggregates recomputed from
// the rows at load time (the emitted aggregate block is derived data).
std::string report_to_json(const RepetitionReport& report);
RepetitionReport report_from_json(const std::string& text);

// Resolved `key = value` lines, one per config field, fixed order.
std::string config_sidecar(const RunConfig& cfg);

}  // namespace setlabel
