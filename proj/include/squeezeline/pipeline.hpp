#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "squeezeline/config.hpp"
#include "squeezeline/resonance.hpp"
#include "squeezeline/scaled.hpp"

namespace squeezeline {

/// Verbosity from SQUEEZELINE_LOG (0 quiet, 1 info, 2 debug).
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

/// Deterministic shortest-exact decimal formatting used in all CSV output.
std::string format_number(double x);

nlohmann::json resonance_report_json(const Potential& pot, const ResonanceReport& rep);

struct ConstantsOutcome {
    ResonanceReport report;
    nlohmann::json doc;
};

/// Runs both detectors on the configured profile and packages the verdict,
/// defects, constants and the vertex unitary.
ConstantsOutcome cmd_constants(const RunConfig& cfg);

std::string scan_csv(const ScanResult& scan);
nlohmann::json scan_json(const ScanResult& scan);

/// Amplitude-parametrized family: the scan parameter multiplies the configured
/// curvature, so a unit-angle profile is scanned directly in its bending angle.
ScanResult run_scan(const RunConfig& cfg);

std::string scatter_csv(const PointInteraction& pi, const std::vector<double>& k_grid);
nlohmann::json spectrum_json(const PointInteraction& pi);

struct ProbeOutcome {
    ExpansionProbe probe;
    std::string csv;
    nlohmann::json summary;
};
ProbeOutcome cmd_probe(const RunConfig& cfg);

struct ConvergeOutcome {
    ConvergenceRecord record;
    std::optional<PointInteraction> interaction;
    std::string csv;
    nlohmann::json summary;
};

/// target_mode: "auto" picks the limit from the resonance analysis,
/// "dirichlet" / "point" force it.
ConvergeOutcome cmd_converge(const RunConfig& cfg, const std::string& target_mode);

struct PipelineOutcome {
    bool ok = false;
    nlohmann::json report;
    std::vector<std::pair<std::string, bool>> checks;
};

/// scan -> constants -> spectrum/scatter -> converge; writes report.json,
/// scan.csv, scatter.csv, converge.csv into out_dir. A stage failure throws
/// with the stage name; outputs of completed stages are kept.
PipelineOutcome cmd_pipeline(const RunConfig& cfg, const std::string& out_dir);

}  // namespace squeezeline
