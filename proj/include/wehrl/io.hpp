#pragma once

// State files and report serialisation. JSON is canonical; the scan CSV is a
// flat view of the same records.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wehrl/geometry.hpp"
#include "wehrl/hessian.hpp"
#include "wehrl/stability.hpp"
#include "wehrl/state_space.hpp"

namespace wehrl {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// File could not be opened, read or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File was read but its content is not a valid state.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// {"N": .., "M": .., "coeffs": [[re, im], ...]} in graded-lex order. The
/// vector is normalised; a warning goes to `warn` if its norm is off by more
/// than 1e-6.
PolynomialState state_from_json(const json& j, std::ostream* warn);
json state_to_json(const PolynomialState& state);

PolynomialState read_state_file(const std::string& path, std::ostream* warn);
void write_state_file(const std::string& path, const PolynomialState& state);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

json to_json(const Estimate& e);
json to_json(const DistanceResult& d);
json to_json(const HessianCoefficients& h);
json to_json(const FarFieldCheck& c);
json to_json(const ScanReport& r);

/// One row per sample; missing ratios are empty fields.
std::string scan_report_csv(const ScanReport& r);

/// Pretty-printed with a trailing newline.
std::string dump(const json& j);

}  // namespace wehrl
