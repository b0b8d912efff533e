#include "squeezeline/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace squeezeline {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("config." + where + ": unknown key '" + it.key() + "'");
    }
}

double get_number(const json& obj, const std::string& where, const char* key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ConfigError("config." + where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& where, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw ConfigError("config." + where + "." + key + ": expected an integer");
    return obj[key].get<int>();
}

std::vector<double> get_array(const json& obj, const std::string& where, const char* key,
                              std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_array())
        throw ConfigError("config." + where + "." + key + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : obj[key]) {
        if (!x.is_number())
            throw ConfigError("config." + where + "." + key +
                              ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

CurvatureProfile parse_profile(const json& p) {
    if (!p.is_object()) throw ConfigError("config.profile: expected an object");
    if (!p.contains("kind") || !p["kind"].is_string())
        throw ConfigError("config.profile.kind: required string");
    const std::string kind = p["kind"].get<std::string>();

    try {
        if (kind == "piecewise_constant") {
            check_keys(p, "profile", {"kind", "segments"});
            if (!p.contains("segments") || !p["segments"].is_array())
                throw ConfigError(
                    "config.profile.segments: required array of [s_start, s_end, value]");
            std::vector<CurvatureProfile::Segment> segs;
            for (const auto& row : p["segments"]) {
                if (!row.is_array() || row.size() != 3)
                    throw ConfigError(
                        "config.profile.segments: each entry must be [s_start, s_end, "
                        "value]");
                segs.push_back({row[0].get<double>(), row[1].get<double>(),
                                row[2].get<double>()});
            }
            return CurvatureProfile::piecewise_constant(std::move(segs));
        }
        if (kind == "bump") {
            check_keys(p, "profile", {"kind", "height", "half_width", "center"});
            if (!p.contains("height") || !p.contains("half_width"))
                throw ConfigError("config.profile: bump requires height and half_width");
            return CurvatureProfile::bump(p["height"].get<double>(),
                                          p["half_width"].get<double>(),
                                          get_number(p, "profile", "center", 0.0));
        }
        if (kind == "samples") {
            check_keys(p, "profile", {"kind", "s", "gamma"});
            if (!p.contains("s") || !p.contains("gamma"))
                throw ConfigError("config.profile: samples requires arrays s and gamma");
            return CurvatureProfile::samples(get_array(p, "profile", "s", {}),
                                             get_array(p, "profile", "gamma", {}));
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config.profile: ") + err.what());
    }
    throw ConfigError("config.profile.kind: must be one of piecewise_constant, bump, "
                      "samples (got '" +
                      kind + "')");
}

void require_positive(double x, const char* name) {
    if (!(x > 0.0)) throw ConfigError(std::string("config.") + name + ": must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config: invalid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(doc, "", {"profile", "scaling", "numerics", "scan", "output"});

    RunConfig cfg;
    if (doc.contains("profile")) cfg.profile = parse_profile(doc["profile"]);

    if (doc.contains("scaling")) {
        const json& s = doc["scaling"];
        if (!s.is_object()) throw ConfigError("config.scaling: expected an object");
        check_keys(s, "scaling", {"lambda_coeffs", "alpha", "d", "eps_max"});
        cfg.scaling.lambda_coeffs = get_array(s, "scaling", "lambda_coeffs", {});
        cfg.scaling.alpha = get_number(s, "scaling", "alpha", cfg.scaling.alpha);
        cfg.scaling.d = get_number(s, "scaling", "d", cfg.scaling.d);
        cfg.scaling.eps_max = get_number(s, "scaling", "eps_max", cfg.scaling.eps_max);
    }
    try {
        cfg.scaling.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config.") + err.what());
    }

    if (doc.contains("numerics")) {
        const json& n = doc["numerics"];
        if (!n.is_object()) throw ConfigError("config.numerics: expected an object");
        check_keys(n, "numerics",
                   {"panels_per_segment", "nodes_per_panel", "ode_tol", "shooting_tol",
                    "resonance_tol", "cross_tol", "probe_points", "eps_list", "k_re",
                    "k_im"});
        auto& nc = cfg.numerics;
        nc.panels_per_segment = get_int(n, "numerics", "panels_per_segment",
                                        nc.panels_per_segment);
        nc.nodes_per_panel = get_int(n, "numerics", "nodes_per_panel", nc.nodes_per_panel);
        nc.ode_tol = get_number(n, "numerics", "ode_tol", nc.ode_tol);
        nc.shooting_tol = get_number(n, "numerics", "shooting_tol", nc.shooting_tol);
        nc.resonance_tol = get_number(n, "numerics", "resonance_tol", nc.resonance_tol);
        nc.cross_tol = get_number(n, "numerics", "cross_tol", nc.cross_tol);
        nc.probe_points = get_array(n, "numerics", "probe_points", nc.probe_points);
        nc.eps_list = get_array(n, "numerics", "eps_list", nc.eps_list);
        nc.k = {get_number(n, "numerics", "k_re", nc.k.real()),
                get_number(n, "numerics", "k_im", nc.k.imag())};
    }
    {
        const auto& nc = cfg.numerics;
        if (nc.panels_per_segment < 1)
            throw ConfigError("config.numerics.panels_per_segment: must be >= 1");
        if (nc.nodes_per_panel < 2)
            throw ConfigError("config.numerics.nodes_per_panel: must be >= 2");
        require_positive(nc.ode_tol, "numerics.ode_tol");
        require_positive(nc.shooting_tol, "numerics.shooting_tol");
        require_positive(nc.resonance_tol, "numerics.resonance_tol");
        require_positive(nc.cross_tol, "numerics.cross_tol");
        for (std::size_t i = 0; i < nc.eps_list.size(); ++i) {
            if (!(nc.eps_list[i] > 0.0))
                throw ConfigError("config.numerics.eps_list: entries must be positive");
            if (i > 0 && !(nc.eps_list[i] < nc.eps_list[i - 1]))
                throw ConfigError(
                    "config.numerics.eps_list: must be strictly decreasing");
        }
        if (!(nc.k.imag() > 0.0))
            throw ConfigError("config.numerics.k_im: must be positive (Im k > 0)");
    }

    if (doc.contains("scan")) {
        const json& s = doc["scan"];
        if (!s.is_object()) throw ConfigError("config.scan: expected an object");
        check_keys(s, "scan", {"param_min", "param_max", "samples"});
        cfg.scan.param_min = get_number(s, "scan", "param_min", cfg.scan.param_min);
        cfg.scan.param_max = get_number(s, "scan", "param_max", cfg.scan.param_max);
        cfg.scan.samples = get_int(s, "scan", "samples", cfg.scan.samples);
        if (!(cfg.scan.param_max > cfg.scan.param_min))
            throw ConfigError("config.scan.param_max: must exceed scan.param_min");
        if (cfg.scan.samples < 2) throw ConfigError("config.scan.samples: must be >= 2");
    }

    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (!o.is_object()) throw ConfigError("config.output: expected an object");
        check_keys(o, "output", {"dir", "format"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string())
                throw ConfigError("config.output.dir: expected a string");
            cfg.output.dir = o["dir"].get<std::string>();
        }
        if (o.contains("format")) {
            if (!o["format"].is_string())
                throw ConfigError("config.output.format: expected a string");
            cfg.output.format = o["format"].get<std::string>();
        }
        if (cfg.output.format != "csv" && cfg.output.format != "json")
            throw ConfigError("config.output.format: must be 'csv' or 'json'");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace squeezeline
