#pragma once

#include "qgb/framework.hpp"
#include "qgb/linalg.hpp"

#include "json.hpp"

#include <string>

namespace qgb {

using Json = nlohmann::ordered_json;

// Parses JSON text; syntax errors become ConfigError with "source:line:column".
Json parse_json(const std::string& text, const std::string& source);
Json load_json(const std::string& path);

// {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order; bare reals are accepted.
Mat matrix_from_json(const Json& j, const std::string& field);
Json matrix_to_json(const Mat& m);

HilbertSpace space_from_json(const Json& j, const std::string& field);
Json space_to_json(const HilbertSpace& h);

// Optional "space" wrapper; without it the matrix lives on a single factor named default_label.
State state_from_json(const Json& j, const std::string& field, const std::string& default_label = "sys");
Observable observable_from_json(const Json& j, const std::string& field, const std::string& default_label = "sys");

// Sample-tuple label: the z labels joined with commas.
std::string sample_label(const LearningInstance& inst, int s);

LearningInstance instance_from_json(const Json& j);
Json instance_to_json(const LearningInstance& inst);
LearningInstance load_instance(const std::string& path);

}  // namespace qgb
