#pragma once

// JSON (de)serialization for constitutive models, plus small deterministic
// file helpers shared by the CLI and the report writers.
//
// Wire shape: {"family": "<name>", "params": { ... }}. Parsing is strict:
// every field must be a parameter the named family actually uses, and all
// used parameters without a documented default must be present.

#include <json.hpp>

#include <string>

#include "rheograph/models.hpp"

namespace rheo {

using json = nlohmann::json;

json to_json(const BulkModel& m);
json to_json(const BoundaryModel& bc);

// Throw Error(InvalidConfig) on structural problems and let validate()
// report value errors (InvalidParameters).
BulkModel bulk_model_from_json(const json& j);
BoundaryModel boundary_model_from_json(const json& j);

// Canonical text form: 2-space indent, keys sorted (nlohmann object order),
// shortest round-trip numbers, trailing newline.
std::string dump_json(const json& j);

json parse_json_file(const std::string& path);
json parse_json_text(const std::string& text);

// Write via a temp file + rename so readers never observe partial output.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace rheo
