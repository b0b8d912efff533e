#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "squeezeline/config.hpp"
#include "squeezeline/pipeline.hpp"

using namespace squeezeline;

namespace {

const char* kFullConfig = R"json({
  "profile": {"kind": "piecewise_constant", "segments": [[0.0, 1.0, 6.283185307179586]]},
  "scaling": {"lambda_coeffs": [-1.0], "alpha": 3.0, "d": 1.0, "eps_max": 0.5},
  "numerics": {"panels_per_segment": 16, "nodes_per_panel": 8, "ode_tol": 1e-11,
               "shooting_tol": 1e-8, "resonance_tol": 1e-6, "cross_tol": 1e-6,
               "eps_list": [0.2, 0.1, 0.05], "k_re": 0.0, "k_im": 1.0},
  "scan": {"param_min": 0.5, "param_max": 2.5, "samples": 21},
  "output": {"dir": "out", "format": "csv"}
})json";

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("a full config parses") {
    const RunConfig cfg = parse_config(kFullConfig);
    CHECK(cfg.profile.has_value());
    CHECK(cfg.scaling.lambda1() == -1.0);
    CHECK(cfg.numerics.eps_list.size() == 3);
    CHECK(cfg.scan.samples == 21);
    CHECK(cfg.output.format == "csv");
    CHECK(bending_angle(cfg.profile_ref()) ==
          doctest::Approx(6.283185307179586).epsilon(1e-14));
}

TEST_CASE("unknown keys are rejected with the key name") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"profil": {}})"),
                         doctest::Contains("profil"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"numerics": {"panels": 4}})"),
        doctest::Contains("panels"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(
            R"({"profile": {"kind": "bump", "height": 1.0, "half_width": 1.0, "hieght": 2.0}})"),
        doctest::Contains("hieght"), ConfigError);
}

TEST_CASE("validation names the offending field") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"scaling": {"alpha": 1.0}})"),
                         doctest::Contains("alpha"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"numerics": {"eps_list": [0.1, 0.2]}})"),
        doctest::Contains("eps_list"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"numerics": {"k_im": -1.0}})"),
                         doctest::Contains("k_im"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"output": {"format": "xml"}})"),
                         doctest::Contains("format"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"numerics": {"ode_tol": 0.0}})"),
                         doctest::Contains("ode_tol"), ConfigError);
}

TEST_CASE("profile kinds parse and validate") {
    CHECK(parse_config(R"({"profile": {"kind": "bump", "height": 1.0, "half_width": 0.5}})")
              .profile.has_value());
    CHECK(parse_config(
              R"({"profile": {"kind": "samples", "s": [0, 0.5, 1], "gamma": [0, 1, 0]}})")
              .profile.has_value());
    CHECK_THROWS_WITH_AS(parse_config(R"({"profile": {"kind": "circle"}})"),
                         doctest::Contains("kind"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"profile": {"kind": "piecewise_constant", "segments": [[0, 1]]}})"),
        ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"profile": {"kind": "bump", "height": 1.0}})"),
                    ConfigError);
}

TEST_CASE("invalid json is a config error") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("missing profile is reported on access") {
    const RunConfig cfg = parse_config("{}");
    CHECK_THROWS_AS(cfg.profile_ref(), ConfigError);
}

TEST_CASE("csv numbers round-trip exactly") {
    CHECK(format_number(1.0) == "1");
    for (const double x : {0.1, -2.5e-13, 6.283185307179586, 1e300})
        CHECK(std::stod(format_number(x)) == x);
}

}  // TEST_SUITE

// Subprocess tests around the installed binary; run by ctest with
// SQUEEZELINE_BIN pointing at the built tool.
TEST_SUITE("cli") {

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    const char* bin = std::getenv("SQUEEZELINE_BIN");
    REQUIRE(bin != nullptr);
    static int counter = 0;
    const auto out_path = std::filesystem::temp_directory_path() /
                          ("squeezeline_cli_" + std::to_string(counter++) + ".out");
    const std::string cmd =
        std::string(bin) + " " + args + " > " + out_path.string() + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    CliRun r;
    r.code = WEXITSTATUS(rc);
    r.out = read_file(out_path);
    std::filesystem::remove(out_path);
    return r;
}

std::filesystem::path write_config(const std::string& name, const std::string& text) {
    const auto dir = std::filesystem::temp_directory_path() / "squeezeline_cli_cfg";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("constants finds the resonant angle") {
    const auto cfg = write_config("resonant.json", kFullConfig);
    const auto r = run_cli("constants --config " + cfg.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("\"case\": \"II\"") != std::string::npos);
    CHECK(r.out.find("lambda_hat") != std::string::npos);
}

TEST_CASE("constants reports case I off resonance") {
    const auto cfg = write_config("resonant2.json", kFullConfig);
    const auto r = run_cli("constants --config " + cfg.string() + " --theta 1.0");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"case\": \"I\"") != std::string::npos);
}

TEST_CASE("malformed config exits with code 2 and names the field") {
    const auto cfg = write_config("bad_alpha.json",
                                  R"({"profile": {"kind": "bump", "height": 1.0,
                                      "half_width": 1.0}, "scaling": {"alpha": 0.5}})");
    const auto r = run_cli("constants --config " + cfg.string());
    CHECK(r.code == 2);
}

TEST_CASE("unknown cli arguments exit with code 2") {
    const auto r = run_cli("constants --does-not-exist");
    CHECK(r.code == 2);
}

TEST_CASE("computational failures exit with code 1") {
    // zero curvature: the effective potential is degenerate
    const auto cfg = write_config(
        "zero.json",
        R"({"profile": {"kind": "piecewise_constant", "segments": [[0.0, 1.0, 0.0]]}})");
    const auto r = run_cli("constants --config " + cfg.string());
    CHECK(r.code == 1);
}

TEST_CASE("scan output is byte-identical across runs") {
    const auto cfg = write_config("scan.json", R"json({
      "profile": {"kind": "piecewise_constant", "segments": [[0.0, 1.0, 1.0]]},
      "scan": {"param_min": 5.0, "param_max": 7.0, "samples": 9}
    })json");
    const auto a = run_cli("scan --config " + cfg.string());
    const auto b = run_cli("scan --config " + cfg.string());
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("param,defect,case,c1,c2,lambda_hat") == 0);
    CHECK(a.out.find(",II,") != std::string::npos);  // 2 pi lies inside the range
}

TEST_CASE("scatter and spectrum run from flags") {
    const auto sc = run_cli("scatter --c1 1 --c2 0 --lambda-hat 2 --k-grid 0.5,1,2");
    CHECK(sc.code == 0);
    CHECK(sc.out.find("k,re_t,im_t") == 0);

    const auto sp = run_cli("spectrum --c1 1 --c2 0 --lambda-hat -2");
    CHECK(sp.code == 0);
    CHECK(sp.out.find("\"energy\": -1.0") != std::string::npos);

    const auto none = run_cli("spectrum --c1 1 --c2 0 --lambda-hat 1");
    CHECK(none.code == 0);
    CHECK(none.out.find("\"bound_state\": null") != std::string::npos);
}

TEST_CASE("pipeline writes its artifact directory and the bound state") {
    // lambda_1 > 0 deepens the scaled well, so the limit coupling is negative
    // and the spectrum carries one bound state
    const auto cfg = write_config("pipe.json", R"json({
      "profile": {"kind": "piecewise_constant", "segments": [[0.0, 1.0, 1.0]]},
      "scaling": {"lambda_coeffs": [1.0]},
      "numerics": {"eps_list": [0.2, 0.1, 0.05], "probe_points": [-1.0, -0.5, 0.5, 1.0]},
      "scan": {"param_min": 5.0, "param_max": 7.0, "samples": 11}
    })json");
    const auto dir = std::filesystem::temp_directory_path() / "squeezeline_pipe_out";
    std::filesystem::remove_all(dir);
    const auto r = run_cli("pipeline --config " + cfg.string() + " --out " + dir.string());
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "scan.csv"));
    CHECK(std::filesystem::exists(dir / "scatter.csv"));
    CHECK(std::filesystem::exists(dir / "converge.csv"));
    const std::string report = read_file(dir / "report.json");
    CHECK(report.find("\"ok\": true") != std::string::npos);
    CHECK(report.find("\"target\": \"point\"") != std::string::npos);
    CHECK(report.find("\"bound_state\": {") != std::string::npos);
    CHECK(report.find("\"kappa\"") != std::string::npos);
}

}  // TEST_SUITE
