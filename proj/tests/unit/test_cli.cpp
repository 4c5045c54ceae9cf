#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "paircredit/cli/commands.hpp"

namespace fs = std::filesystem;
using namespace paircredit::cli;

namespace {

const std::string kData = PAIRCREDIT_TEST_DATA;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "paircredit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Copy of the reference scenario with one substring replaced.
fs::path variant(const std::string& name, const std::string& from, const std::string& to) {
    std::string text = slurp(kData + "/reference_scenario.yaml");
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    text.replace(pos, from.size(), to);
    const fs::path p = fs::temp_directory_path() / ("paircredit_" + name + ".yaml");
    std::ofstream(p) << text;
    return p;
}

std::string body(const std::string& report) { return report.substr(report.find('\n') + 1); }

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

const std::string kScenario = kData + "/reference_scenario.yaml";

}  // namespace

TEST(Cli, HelpAndUsage) {
    EXPECT_EQ(invoke({"--help"}).code, kOk);
    EXPECT_EQ(invoke({}).code, kInvalidInput);
    EXPECT_EQ(invoke({"price-cds"}).code, kInvalidInput);
    EXPECT_EQ(invoke({"price-cds", "--scenario", "/nonexistent.yaml"}).code, kInvalidInput);
    EXPECT_EQ(invoke({"price-cds", "--scenario", kScenario, "--format", "xml"}).code, kInvalidInput);
}

TEST(Cli, DensityGridHeader) {
    const Outcome r = invoke({"density", "--scenario", kScenario, "--t-grid", "1:10:10", "--space-grid", "0.5:8:10"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 101u);
    EXPECT_EQ(rows[0], "t,coord,f_horizontal,f_slanted,f_survival");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream row(rows[i]);
        int fields = 0;
        for (std::string cell; std::getline(row, cell, ',');) {
            EXPECT_GE(std::stod(cell), 0.0);
            ++fields;
        }
        EXPECT_EQ(fields, 5);
    }
    EXPECT_EQ(invoke({"density", "--scenario", kScenario, "--t-grid", "1:10"}).code, kInvalidInput);
}

TEST(Cli, DensityDefaultGrid) {
    const Outcome r = invoke({"density", "--scenario", kScenario});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(lines(r.out).size(), 101u);
}

TEST(Cli, ValueBelowBarrierNamesTheFirm) {
    const fs::path p = variant("below", "v0: 100.0\n    log_distance: 1.2", "v0: 100.0\n    barrier: 120.0");
    const Outcome r = invoke({"price-cds", "--scenario", p.string()});
    EXPECT_EQ(r.code, kInvalidInput);
    EXPECT_NE(r.err.find("counterparty"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find(p.string() + ":"), std::string::npos) << r.err;
}

TEST(Cli, PerfectCorrelationRejected) {
    const fs::path p = variant("rho1", "correlation: 0.4", "correlation: 1.0");
    const Outcome r = invoke({"price-cds", "--scenario", p.string()});
    EXPECT_EQ(r.code, kInvalidInput);
    EXPECT_NE(r.err.find("correlation"), std::string::npos) << r.err;
}

TEST(Cli, UnknownKeyRejected) {
    const fs::path p = variant("unknown", "rate: 0.05", "rate: 0.05\n  rates: 0.05");
    const Outcome r = invoke({"price-cds", "--scenario", p.string()});
    EXPECT_EQ(r.code, kInvalidInput);
    EXPECT_NE(r.err.find("rates"), std::string::npos) << r.err;
}

TEST(Cli, PriceCdsReport) {
    const Outcome r = invoke({"price-cds", "--scenario", kScenario, "--format", "json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2u);
    const auto header = nlohmann::json::parse(rows[0]);
    EXPECT_EQ(header["tool"], "paircredit");
    const auto j = nlohmann::json::parse(rows[1]);
    EXPECT_EQ(j["command"], "price-cds");
    const double ds = j["standard_default_leg"]["value"], dc = j["counterparty_default_leg"]["value"];
    const double fee = j["fee_leg"]["value"], fv = j["fair_value"]["value"];
    EXPECT_NEAR(ds, 0.0170556726, 1e-8);
    EXPECT_NEAR(dc, 0.0010860796, 1e-8);
    EXPECT_NEAR(fee, 0.0861136109, 1e-8);
    EXPECT_DOUBLE_EQ(fv, ds + dc - fee);
    EXPECT_NEAR(j["par_spread"]["value"].get<double>(), 0.004277165271, 1e-8);
    EXPECT_LT(std::abs(j["par_spread"]["residual"].get<double>()), 1e-9);
    EXPECT_GE(j["diagnostics"]["negative_density_clips"].get<long>(), 0);
}

TEST(Cli, PriceFtdTextReport) {
    const Outcome r = invoke({"price-ftd", "--scenario", kData + "/reference_ftd.yaml"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(r.out.rfind("# paircredit ", 0), 0u);
    const std::string b = body(r.out);
    EXPECT_NE(b.find("default_leg.value"), std::string::npos);
    EXPECT_NE(b.find("fee_leg_per_unit_spread.value"), std::string::npos);
    EXPECT_NE(b.find("fair_spread.value"), std::string::npos);
    // ftd contract in a cds scenario
    EXPECT_EQ(invoke({"price-ftd", "--scenario", kScenario}).code, kInvalidInput);
}

TEST(Cli, OutputFile) {
    const fs::path p = fs::temp_directory_path() / "paircredit_density.csv";
    fs::remove(p);
    const Outcome r = invoke({"density", "--scenario", kScenario, "--t-grid", "1:2:2", "--space-grid", "1:2:2",
                              "--output", p.string()});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(lines(slurp(p)).size(), 5u);
}

TEST(Cli, ValidatePassesAndIsReproducible) {
    const std::vector<std::string> args{"validate", "--scenario", kScenario, "--paths", "50000", "--seed", "11",
                                        "--tol", "1e-5"};
    const Outcome a = invoke(args);
    ASSERT_EQ(a.code, kOk) << a.out << a.err;
    const Outcome b = invoke(args);
    EXPECT_EQ(body(a.out), body(b.out));
    EXPECT_NE(body(a.out).find("seed"), std::string::npos);
    const auto j = nlohmann::json::parse(lines(invoke([&] {
                                                    auto v = args;
                                                    v.insert(v.end(), {"--format", "json"});
                                                    return v;
                                                }())
                                                    .out)[1]);
    EXPECT_EQ(j["seed"], 11);
    EXPECT_EQ(j["n_paths"], 50000);
    EXPECT_EQ(j["flagged"], false);
}

TEST(Cli, ValidateCatchesAPerturbedWedge) {
    const Outcome r = invoke({"validate", "--scenario", kScenario, "--paths", "50000", "--tol", "1e-5",
                              "--perturb-wedge-angle", "0.25"});
    EXPECT_EQ(r.code, kValidationFailed) << r.out << r.err;
}
