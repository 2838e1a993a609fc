#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "folcyc/continuation.hpp"
#include "folcyc/melnikov.hpp"
#include "folcyc/orbits.hpp"

namespace folcyc {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Batch-run configuration. Complex values are two-element [re, im] arrays
/// in the file; a and eps are optional there and fall back to a = 0.05 and
/// eps = i/m + 0.001 for the requested m.
struct RunConfig {
    std::optional<Complex> a;
    std::optional<Complex> eps;
    int m = 2;
    Annulus annulus_A0{0.2, 5.0};
    Annulus guard{0.05, 20.0};
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_steps = 200000;
    int quadrature_points = 512;
    std::vector<Complex> path;  // empty -> straight from eps to 0
    std::string out_dir = "out";
    bool emit_traces = false;
};

/// Parse a configuration tree; malformed fields are reported by path
/// ("integrator.rel_tol: ..."). Unknown keys are rejected.
RunConfig parse_config(const Json& j);

RunConfig load_config(const std::string& file);

FoliationParams family_of(const RunConfig& cfg);
LiftOptions lift_options_of(const RunConfig& cfg, bool record_trace = false);
std::vector<Complex> path_of(const RunConfig& cfg);

Json to_json(const Complex& z);
Complex complex_from_json(const Json& j, const std::string& where);

Json to_json(const OrbitRecord& rec);
OrbitRecord orbit_from_json(const Json& j);

Json to_json(const EscapeReport& rep);
Json to_json(const MelnikovEval& ev);

/// Parse "0.3", "-0.5i", "0.1+0.2i", "1-2i" into a complex number.
Complex parse_complex(const std::string& text);
std::string format_complex(const Complex& z);

/// Shortest round-trip decimal representation of a binary64 value.
std::string format_double(double x);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace folcyc
