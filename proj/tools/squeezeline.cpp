// squeezeline: resonances and limit point interactions of squeezed bent
// waveguides. Subcommands map onto the pipeline stages; see README.md.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "squeezeline/config.hpp"
#include "squeezeline/pipeline.hpp"
#include "squeezeline/pointint.hpp"

namespace {

using namespace squeezeline;

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

// k grid spec: "a,b,c" | "lo:hi:n" (linear) | "lo:hi:n:log"
std::vector<double> parse_k_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_list(text);
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3 && parts.size() != 4)
        throw ConfigError("k-grid: expected lo:hi:n or lo:hi:n:log");
    const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
    const int n = std::stoi(parts[2]);
    const bool logspace = parts.size() == 4 && parts[3] == "log";
    if (n < 1 || !(hi > lo)) throw ConfigError("k-grid: need lo < hi and n >= 1");
    if (logspace && !(lo > 0.0)) throw ConfigError("k-grid: log spacing needs lo > 0");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double t = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
        out.push_back(logspace ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    return out;
}

struct Overrides {
    std::string eps_list;
    double k_re = std::numeric_limits<double>::quiet_NaN();
    double k_im = std::numeric_limits<double>::quiet_NaN();
    double theta = std::numeric_limits<double>::quiet_NaN();
};

RunConfig load_with_overrides(const std::string& path, const Overrides& ov) {
    RunConfig cfg = load_config(path);
    if (!ov.eps_list.empty()) {
        cfg.numerics.eps_list = parse_list(ov.eps_list);
        for (std::size_t i = 0; i < cfg.numerics.eps_list.size(); ++i) {
            if (!(cfg.numerics.eps_list[i] > 0.0))
                throw ConfigError("--eps-list: entries must be positive");
            if (i > 0 && !(cfg.numerics.eps_list[i] < cfg.numerics.eps_list[i - 1]))
                throw ConfigError("--eps-list: must be strictly decreasing");
        }
    }
    if (!std::isnan(ov.k_re)) cfg.numerics.k.real(ov.k_re);
    if (!std::isnan(ov.k_im)) cfg.numerics.k.imag(ov.k_im);
    if (!(cfg.numerics.k.imag() > 0.0))
        throw ConfigError("--k-im: the spectral point requires Im k > 0");
    if (!std::isnan(ov.theta)) {
        const double base = bending_angle(cfg.profile_ref(), cfg.numerics.quadrature());
        if (base == 0.0)
            throw ConfigError("--theta: the configured profile has zero bending angle "
                              "and cannot be rescaled to a target angle");
        cfg.profile = cfg.profile_ref().scaled_by(ov.theta / base);
    }
    return cfg;
}

void write_or_print(const std::string& out_dir, const std::string& filename,
                    const std::string& text) {
    if (out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / filename;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

PointInteraction interaction_from_flags(double c1, double c2,
                                        const std::string& lambda_hat) {
    if (lambda_hat == "inf" || lambda_hat == "+inf")
        return PointInteraction::dirichlet_decoupled();
    return PointInteraction(c1, c2, std::stod(lambda_hat));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"squeezeline: threshold resonances and limit point interactions of "
                 "squeezed bent Dirichlet waveguides"};
    app.require_subcommand(1);

    std::string config_path, out_dir, format = "csv", target = "auto";
    std::string lambda_hat_flag = "0", k_grid_spec = "0.1:10:50:log";
    double c1_flag = 1.0, c2_flag = 0.0;
    Overrides ov;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "JSON run configuration")
                ->required();
        cmd->add_option("--out", out_dir, "output directory (default: stdout)");
        cmd->add_option("--format", format, "table format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--eps-list", ov.eps_list, "override eps sweep (comma list)");
        cmd->add_option("--k-re", ov.k_re, "override Re k");
        cmd->add_option("--k-im", ov.k_im, "override Im k");
        cmd->add_option("--theta", ov.theta, "rescale the profile to this bending angle");
    };

    CLI::App* c_constants = app.add_subcommand(
        "constants", "detect the threshold resonance and report c1, c2, lambda_hat");
    add_common(c_constants, true);

    CLI::App* c_scan = app.add_subcommand(
        "scan", "scan the profile amplitude for threshold resonances");
    add_common(c_scan, true);

    CLI::App* c_scatter =
        app.add_subcommand("scatter", "scattering amplitudes of a point interaction");
    c_scatter->add_option("--c1", c1_flag, "coupling constant c1");
    c_scatter->add_option("--c2", c2_flag, "coupling constant c2");
    c_scatter->add_option("--lambda-hat", lambda_hat_flag,
                          "coupling strength (number or 'inf')");
    c_scatter->add_option("--k-grid", k_grid_spec, "momenta: a,b,c or lo:hi:n[:log]");
    c_scatter->add_option("--out", out_dir, "output directory (default: stdout)");

    CLI::App* c_spectrum =
        app.add_subcommand("spectrum", "bound-state record of a point interaction");
    c_spectrum->add_option("--c1", c1_flag, "coupling constant c1");
    c_spectrum->add_option("--c2", c2_flag, "coupling constant c2");
    c_spectrum->add_option("--lambda-hat", lambda_hat_flag,
                           "coupling strength (number or 'inf')");
    c_spectrum->add_option("--out", out_dir, "output directory (default: stdout)");

    CLI::App* c_probe = app.add_subcommand(
        "probe", "scalar-product expansion table of the factorized resolvent");
    add_common(c_probe, true);

    CLI::App* c_converge = app.add_subcommand(
        "converge", "resolvent convergence sweep against the limit operator");
    add_common(c_converge, true);
    c_converge->add_option("--target", target, "limit target")
        ->check(CLI::IsMember({"auto", "dirichlet", "point"}));

    CLI::App* c_pipeline = app.add_subcommand(
        "pipeline", "full run: scan, constants, spectrum/scatter, converge");
    add_common(c_pipeline, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return (code == 0) ? 0 : 2;
    }

    try {
        if (c_constants->parsed()) {
            const RunConfig cfg = load_with_overrides(config_path, ov);
            const ConstantsOutcome out = cmd_constants(cfg);
            write_or_print(out_dir, "constants.json", out.doc.dump(2) + "\n");
        } else if (c_scan->parsed()) {
            const RunConfig cfg = load_with_overrides(config_path, ov);
            const ScanResult scan = run_scan(cfg);
            if (format == "json")
                write_or_print(out_dir, "scan.json", scan_json(scan).dump(2) + "\n");
            else
                write_or_print(out_dir, "scan.csv", scan_csv(scan));
        } else if (c_scatter->parsed()) {
            const PointInteraction pi =
                interaction_from_flags(c1_flag, c2_flag, lambda_hat_flag);
            write_or_print(out_dir, "scatter.csv",
                           scatter_csv(pi, parse_k_grid(k_grid_spec)));
        } else if (c_spectrum->parsed()) {
            const PointInteraction pi =
                interaction_from_flags(c1_flag, c2_flag, lambda_hat_flag);
            write_or_print(out_dir, "spectrum.json", spectrum_json(pi).dump(2) + "\n");
        } else if (c_probe->parsed()) {
            const RunConfig cfg = load_with_overrides(config_path, ov);
            const ProbeOutcome out = cmd_probe(cfg);
            if (out_dir.empty()) {
                std::cout << (format == "json" ? out.summary.dump(2) + "\n" : out.csv);
            } else {
                write_or_print(out_dir, "probe.csv", out.csv);
                write_or_print(out_dir, "probe.json", out.summary.dump(2) + "\n");
            }
        } else if (c_converge->parsed()) {
            const RunConfig cfg = load_with_overrides(config_path, ov);
            const ConvergeOutcome out = cmd_converge(cfg, target);
            if (out_dir.empty()) {
                std::cout << (format == "json" ? out.summary.dump(2) + "\n" : out.csv);
            } else {
                write_or_print(out_dir, "converge.csv", out.csv);
                write_or_print(out_dir, "converge.json", out.summary.dump(2) + "\n");
            }
        } else if (c_pipeline->parsed()) {
            const RunConfig cfg = load_with_overrides(config_path, ov);
            if (out_dir.empty())
                throw ConfigError("pipeline: --out DIR is required");
            const PipelineOutcome out = cmd_pipeline(cfg, out_dir);
            for (const auto& [name, pass] : out.checks)
                std::cout << (pass ? "[pass] " : "[FAIL] ") << name << "\n";
            std::cout << (out.ok ? "pipeline ok" : "pipeline failed") << "\n";
            return out.ok ? 0 : 1;
        }
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
