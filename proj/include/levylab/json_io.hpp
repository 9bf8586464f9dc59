#pragma once

// JSON encoding of measure, process, function and sequence specs. Every spec
// carries a "variant" discriminator; parse errors throw ValidationError with
// a JSON path such as "$.atoms[1].lambda".

#include <json.hpp>
#include <string>

#include "levylab/function_space.hpp"
#include "levylab/interpolation.hpp"
#include "levylab/levy_model.hpp"
#include "levylab/malliavin.hpp"
#include "levylab/smoothness.hpp"
#include "levylab/stable_process.hpp"

namespace levylab {

using Json = nlohmann::ordered_json;

/// Parses text, mapping syntax errors to ValidationError.
Json parse_json_text(const std::string& text, const std::string& what);
Json read_json_file(const std::string& path);

LevyMeasure measure_from_json(const Json& j, const std::string& path = "$");
Json to_json(const LevyMeasure& m);

Process process_from_json(const Json& j, const std::string& path = "$");
Json to_json(const Process& p);

FunctionSpec function_from_json(const Json& j, const std::string& path = "$");
Json to_json(const FunctionSpec& f);

SequenceElement sequence_from_json(const Json& j, const std::string& path = "$");

Json to_json(const D12Report& r);
Json to_json(const SmoothnessFit& f);
Json to_json(const MembershipStat& m);

/// Appends a library field path ("terms/0/lambda" or "c[2]") to a JSON path prefix.
std::string join_path(const std::string& prefix, const std::string& sub);

/// Shortest round-trip decimal for a double ("inf", "-inf", "nan" for non-finite values).
std::string format_double(double v);

}  // namespace levylab
