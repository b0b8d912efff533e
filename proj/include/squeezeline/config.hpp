#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "squeezeline/geometry.hpp"

namespace squeezeline {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericsConfig {
    int panels_per_segment = 16;
    int nodes_per_panel = 8;
    double ode_tol = 1e-11;
    double shooting_tol = 1e-8;
    double resonance_tol = 1e-6;  // Birman-Schwinger gap tolerance
    double cross_tol = 1e-6;      // cross-method agreement for the constants
    std::vector<double> probe_points;  // empty selects the default tensor grid
    std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.025};
    std::complex<double> k = {0.0, 1.0};

    QuadratureSpec quadrature() const {
        return {panels_per_segment, nodes_per_panel};
    }
};

struct ScanConfig {
    double param_min = 0.25;
    double param_max = 2.5;
    int samples = 101;
};

struct OutputConfig {
    std::string dir = ".";
    std::string format = "csv";  // csv | json
};

/// One strict-schema run configuration: unknown keys are rejected so a typo
/// cannot silently fall back to a default.
struct RunConfig {
    std::optional<CurvatureProfile> profile;
    ScalingFamily scaling;
    NumericsConfig numerics;
    ScanConfig scan;
    OutputConfig output;

    const CurvatureProfile& profile_ref() const {
        if (!profile) throw ConfigError("config.profile: block is required");
        return *profile;
    }
};

/// Parse a JSON config document. Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& json_text);

/// Read and parse a config file.
RunConfig load_config(const std::string& path);

}  // namespace squeezeline
