#pragma once

#include <string>

#include "sqglab/evolution.hpp"

namespace sqg {

// Parses and validates a scenario config JSON object. Unknown keys are
// rejected and error messages name the offending field.
Scenario parse_scenario_json(const std::string& text);

// Canonical echo of a scenario (used by the run manifest).
std::string scenario_to_json(const Scenario& sc);

// Git-style blob hash (sha1 over "blob <size>\0<bytes>"), hex encoded.
std::string git_blob_sha1(const std::string& bytes);

}  // namespace sqg
