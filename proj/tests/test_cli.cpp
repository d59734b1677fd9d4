#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "monomial/cli.hpp"

using monomial::cli::run_command;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_command(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string demo(const std::string& name) { return std::string(MONOMIAL_DEMO_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / ("monomial_cli_test_" + name);
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST(Cli, SolveHermiteJson) {
    auto r = run({"solve", demo("hermite.ode"), "--json"});
    EXPECT_EQ(r.code, 0);
    auto doc = json::parse(r.out);
    ASSERT_EQ(doc["solutions"].size(), 1u);
    const auto& s = doc["solutions"][0];
    EXPECT_EQ(s["lambda"], "2");
    EXPECT_EQ(s["terminated"], true);
    EXPECT_EQ(s["terms"], json::parse(R"([{"exponent":"2","coefficient":"1"},{"exponent":"0","coefficient":"-1/2"}])"));
}

TEST(Cli, CatalogVerifyChebyshev) {
    auto r = run({"catalog", "verify", "chebyshev_t", "--n", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("match: true"), std::string::npos);
}

TEST(Cli, HeunScanTable) {
    auto r = run({"heun", "scan", "--eps2", "1", "--nmax", "4", "--json"});
    ASSERT_EQ(r.code, 0);
    auto rows = json::parse(r.out)["rows"];
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0]["n"], 2);
    EXPECT_EQ(rows[0]["s"], "1/2");
    EXPECT_EQ(rows[0]["energy_ratio"], "3/4");
    EXPECT_EQ(rows[0]["normalizable"], true);
    EXPECT_EQ(rows[1]["n"], 3);
    EXPECT_EQ(rows[1]["s"], "-1/2");
    EXPECT_EQ(rows[1]["energy_ratio"], "3/4");
    EXPECT_EQ(rows[1]["normalizable"], false);

    auto text = run({"heun", "scan", "--eps2", "1", "--nmax", "4"});
    EXPECT_NE(text.out.find("no"), std::string::npos);
}

TEST(Cli, ExitCodesAndErrorNames) {
    auto missing = run({"solve", "/nonexistent/file.ode"});
    EXPECT_EQ(missing.code, 1);
    EXPECT_EQ(missing.err.rfind("InvalidArgument", 0), 0u);

    auto parse = run({"solve", temp_file("bad.ode", "y'' + 2x*y = 0\n")});
    EXPECT_EQ(parse.code, 1);
    EXPECT_EQ(parse.err.rfind("ParseError: 1:8", 0), 0u) << parse.err;

    auto unbound = run({"normal-form", temp_file("unbound.ode", "y'' + k*y = 0\n")});
    EXPECT_EQ(unbound.code, 1);
    EXPECT_EQ(unbound.err.rfind("UnboundParameter", 0), 0u);

    auto family = run({"catalog", "verify", "mathieu"});
    EXPECT_EQ(family.code, 1);
    EXPECT_EQ(family.err.rfind("UnknownFamily", 0), 0u);

    auto param = run({"catalog", "verify", "jacobi", "--n", "2"});
    EXPECT_EQ(param.code, 1);
    EXPECT_EQ(param.err.rfind("MissingParameter", 0), 0u);

    // Neumann in its direct form resonates: F = (D+1)^2 - 1 vanishes at the source exponent 0.
    auto res = run({"solve", temp_file("neumann.ode", "x^2*y'' + 3*x*y' + x^2*y = 1\n")});
    EXPECT_EQ(res.code, 2);
    EXPECT_EQ(res.err.rfind("ResonanceEncountered", 0), 0u) << res.err;

    auto irr = run({"solve", temp_file("irrational.ode", "x^2*y'' + x*y' - 2*y = 0\n")});
    EXPECT_EQ(irr.code, 2);
    EXPECT_EQ(irr.err.rfind("NonRationalIndicialRoot", 0), 0u) << irr.err;

    auto usage = run({"solve"});
    EXPECT_EQ(usage.code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);

    auto nosource = run({"solve", demo("hermite.ode"), "--source"});
    EXPECT_EQ(nosource.code, 1);
}

TEST(Cli, DepthFlagAndEnvironment) {
    auto terms = [](const Result& r) { return json::parse(r.out)["solutions"][0]["terms"].size(); };
    auto shallow = run({"solve", demo("bessel.ode"), "--lambda", "1/2", "--depth", "2", "--json"});
    EXPECT_EQ(terms(shallow), 3u);
    setenv("MONOMIAL_DEPTH", "4", 1);
    auto env = run({"solve", demo("bessel.ode"), "--lambda", "1/2", "--json"});
    auto flag_wins = run({"solve", demo("bessel.ode"), "--lambda", "1/2", "--depth", "1", "--json"});
    setenv("MONOMIAL_DEPTH", "lots", 1);
    auto bad = run({"solve", demo("bessel.ode"), "--json"});
    unsetenv("MONOMIAL_DEPTH");
    EXPECT_EQ(terms(env), 5u);
    EXPECT_EQ(terms(flag_wins), 2u);
    EXPECT_EQ(bad.code, 1);
}

TEST(Cli, SolveSourceMatchesLommel) {
    auto r = run({"solve", demo("lommel.ode"), "--source", "--depth", "3", "--json"});
    ASSERT_EQ(r.code, 0);
    auto t = json::parse(r.out)["solutions"][0]["terms"];
    EXPECT_EQ(t[0]["coefficient"], "4/15");
    EXPECT_EQ(t[1]["coefficient"], "-16/945");
}

TEST(Cli, NormalFormReportsCandidates) {
    auto r = run({"normal-form", demo("hermite.ode"), "--json"});
    ASSERT_EQ(r.code, 0);
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["split"]["shift"], 0);
    EXPECT_EQ(doc["split"]["F"], json::parse(R"(["4","-2"])"));
    EXPECT_EQ(doc["indicial"]["rational"], json::parse(R"(["2"])"));
    auto forced = run({"normal-form", demo("hermite.ode"), "--shift", "2"});
    EXPECT_NE(forced.out.find("F(D) = D^2 - D"), std::string::npos) << forced.out;
    EXPECT_EQ(run({"normal-form", demo("hermite.ode"), "--shift", "1"}).code, 2);
}

TEST(Cli, HeunNumericOutputs) {
    auto wf = run({"heun", "wavefunction", "--n", "2", "--rho", "1", "--samples", "5", "--json"});
    ASSERT_EQ(wf.code, 0);
    auto doc = json::parse(wf.out);
    EXPECT_EQ(doc["samples"].size(), 5u);
    EXPECT_EQ(doc["samples"][0]["psi"], 0.0);
    EXPECT_DOUBLE_EQ(doc["E"].get<double>(), 0.75);

    auto res = run({"heun", "residual", "--json"});
    ASSERT_EQ(res.code, 0);
    EXPECT_LT(json::parse(res.out)["residual"].get<double>(), 1e-5);
    auto off = json::parse(run({"heun", "residual", "--energy-shift", "0.05", "--json"}).out);
    EXPECT_GT(off["residual"].get<double>(), 0.04 * off["max_psi"].get<double>());

    EXPECT_EQ(run({"heun", "wavefunction", "--n", "5", "--rho", "1", "--samples", "3"}).code, 1);
}

TEST(Cli, Deterministic) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"solve", demo("legendre.ode"), "--json"},
             {"catalog", "list", "--json"},
             {"heun", "wavefunction", "--n", "2", "--rho", "1.5", "--samples", "7", "--json"}}) {
        auto a = run(args), b = run(args);
        EXPECT_EQ(a.out, b.out);
        EXPECT_EQ(a.code, 0);
    }
}
