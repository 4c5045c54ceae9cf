#include "paircredit/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paircredit/cli/report.hpp"
#include "paircredit/cli/scenario.hpp"
#include "paircredit/cli/version.hpp"
#include "paircredit/errors.hpp"
#include "paircredit/jointlaw.hpp"
#include "paircredit/mc_oracle.hpp"
#include "paircredit/pricing.hpp"

namespace paircredit::cli {

namespace {

// Tolerance on |P(underlying first) + P(counterparty first) + P(survive) - 1|.
constexpr double kPartitionTol = 2e-3;
constexpr double kZLimit = 3.0;
constexpr double kMinBinHits = 50.0;
constexpr double kMinBinPassFraction = 0.95;

struct Options {
    std::string scenario;
    std::string format = "text";
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::uint64_t> paths;
    std::string t_grid;
    std::string space_grid;
    std::string output;
    double perturb_wedge_angle = 0.0;
};

struct Grid {
    double start, stop;
    int count;
    [[nodiscard]] std::vector<double> points() const {
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i) out[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
        return out;
    }
};

Grid parse_grid(const std::string& text, const std::string& flag) {
    Grid g{};
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.start, &g.stop, &g.count, &tail) != 3 || g.count < 1 ||
        !(g.start > 0.0) || g.stop < g.start) {
        throw ScenarioError("<command line>", 0, flag, "expected start:stop:count with 0 < start <= stop, count >= 1");
    }
    return g;
}

Scenario load(const Options& o) {
    Scenario s = load_scenario(o.scenario);
    if (o.tol) {
        s.pricing.quad.rel_tol = *o.tol;
        try {
            s.pricing.quad.validate();
        } catch (const DomainError& e) {
            throw ScenarioError("<command line>", 0, "--tol", e.what());
        }
    }
    if (o.seed) s.monte_carlo.seed = *o.seed;
    if (o.paths) {
        s.monte_carlo.n_paths = *o.paths;
        try {
            s.monte_carlo.validate();
        } catch (const DomainError& e) {
            throw ScenarioError("<command line>", 0, "--paths", e.what());
        }
    }
    return s;
}

PairModel pair_of(const Scenario& s, const Options& o) {
    PairModel pair = make_pair_model(s.underlying, s.counterparty, s.market);
    pair.wedge.wedge_angle += o.perturb_wedge_angle;  // test hook; 0 in normal use
    return pair;
}

Json leg_json(const LegValue& leg) {
    Json j;
    j["value"] = leg.value;
    j["error"] = leg.error_estimate;
    for (const auto& [name, v] : leg.breakdown) j[name] = v;
    return j;
}

Json header_fields(const std::string& command, const Options& o) {
    Json j;
    j["command"] = command;
    j["scenario"] = o.scenario;
    return j;
}

const CdsContract& require_cds(const Scenario& s, const Options& o) {
    if (!s.cds) throw ScenarioError(o.scenario, 0, "contract.cds", "this command needs a 'cds' contract block");
    return *s.cds;
}

const FtdContract& require_ftd(const Scenario& s, const Options& o) {
    if (!s.ftd) throw ScenarioError(o.scenario, 0, "contract.ftd", "this command needs an 'ftd' contract block");
    return *s.ftd;
}

Json price_cds(const Scenario& s, const Options& o) {
    const CdsContract& c = require_cds(s, o);
    const PairModel pair = pair_of(s, o);
    const LegValue ds = standard_default_leg(pair, c, s.pricing);
    const LegValue dc = counterparty_default_leg(pair, c, s.pricing);
    const LegValue fee = fee_leg(pair, c, s.pricing);
    const LegValue annuity = fee_leg_per_unit_spread(pair, c.maturity, c.notional, s.pricing);
    const ParSpread par = cds_par_spread(pair, c, s.pricing);

    Json j = header_fields("price-cds", o);
    j["standard_default_leg"] = leg_json(ds);
    j["counterparty_default_leg"] = leg_json(dc);
    j["fee_leg"] = leg_json(fee);
    const double fv_error = ds.error_estimate + dc.error_estimate + fee.error_estimate;
    j["fair_value"] = {{"value", ds.value + dc.value - fee.value}, {"error", fv_error}};
    // value error over the slope of the fair value in s (about -annuity)
    const double par_error = (fv_error + std::abs(par.residual)) / annuity.value;
    j["par_spread"] = {{"value", par.spread}, {"error", par_error}, {"residual", par.residual}};
    j["diagnostics"] = {{"negative_density_clips", negative_density_clips()}};
    return j;
}

Json price_ftd(const Scenario& s, const Options& o) {
    const FtdContract& c = require_ftd(s, o);
    const PairModel pair = pair_of(s, o);
    const LegValue d = ftd_default_leg(pair, c, s.pricing);
    const LegValue annuity = fee_leg_per_unit_spread(pair, c.maturity, c.notional, s.pricing);
    if (!(annuity.value > 0.0)) throw DegenerateContract("fee leg per unit spread is zero");
    const double spread = d.value / annuity.value;

    Json j = header_fields("price-ftd", o);
    j["default_leg"] = leg_json(d);
    j["fee_leg_per_unit_spread"] = leg_json(annuity);
    j["fair_spread"] = {{"value", spread},
                        {"error", d.error_estimate / annuity.value +
                                      d.value * annuity.error_estimate / (annuity.value * annuity.value)}};
    j["diagnostics"] = {{"negative_density_clips", negative_density_clips()}};
    return j;
}

std::string density_csv(const Scenario& s, const Options& o) {
    const PairModel pair = pair_of(s, o);
    const double maturity = s.cds ? s.cds->maturity : s.ftd->maturity;
    const WedgeDensityParams p{pair.wedge, s.pricing.series, s.pricing.exponent, maturity};
    const Grid tg = o.t_grid.empty() ? Grid{maturity / 10.0, maturity, 10} : parse_grid(o.t_grid, "--t-grid");
    const double reach = pair.wedge.r0 + 4.0 * std::sqrt(maturity);
    const Grid xg = o.space_grid.empty() ? Grid{reach / 10.0, reach, 10} : parse_grid(o.space_grid, "--space-grid");

    std::ostringstream out;
    out << "t,coord,f_horizontal,f_slanted,f_survival\n";
    char line[160];
    for (double t : tg.points()) {
        for (double x : xg.points()) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", t, x, hitting_density_horizontal(t, x, p),
                          hitting_density_slanted(t, x, p), survival_density(x, pair.wedge.theta0, t, p));
            out << line;
        }
    }
    return out.str();
}

double z_score(double closed, double closed_err, double mc, double mc_err) {
    const double scale = std::hypot(closed_err, mc_err);
    const double diff = closed - mc;
    if (scale == 0.0) return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    return diff / scale;
}

Json compare(double closed, double closed_err, const McEstimate& mc, bool& flagged) {
    const double z = z_score(closed, closed_err, mc.mean, mc.std_error);
    const bool bad = !(std::abs(z) <= kZLimit);
    flagged = flagged || bad;
    return {{"closed_form", closed}, {"closed_form_error", closed_err}, {"monte_carlo", mc.mean},
            {"std_error", mc.std_error}, {"z", std::isfinite(z) ? Json(z) : Json(z > 0 ? "inf" : "-inf")},
            {"flagged", bad}};
}

Json histogram_check(Boundary side, const Scenario& s, const PairModel& pair, double maturity, bool& flagged) {
    const double reach = pair.wedge.r0 + 4.0 * std::sqrt(maturity);
    std::vector<double> t_edges(11), x_edges(11);
    for (int i = 0; i <= 10; ++i) {
        t_edges[i] = maturity * i / 10.0;
        x_edges[i] = reach * i / 10.0;
    }
    const HittingHistogram h = mc_hitting_histogram(side, s.underlying, s.counterparty, s.market, maturity, t_edges,
                                                    x_edges, s.monte_carlo);
    const WedgeDensityParams p{pair.wedge, s.pricing.series, s.pricing.exponent, maturity};
    QuadSpec bin_quad = s.pricing.quad;
    bin_quad.abs_tol = 1e-12;
    int tested = 0, within = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < t_edges.size(); ++i) {
        for (std::size_t k = 0; k + 1 < x_edges.size(); ++k) {
            const std::size_t idx = h.index(i, k);
            if (static_cast<double>(h.counts[idx]) < kMinBinHits) continue;
            const Rectangle box{t_edges[i], t_edges[i + 1], x_edges[k], x_edges[k + 1]};
            auto f = [&](double t, double x) {
                if (t <= 0.0 || x <= 0.0) return 0.0;
                return side == Boundary::horizontal ? hitting_density_horizontal(t, x, p)
                                                    : hitting_density_slanted(t, x, p);
            };
            const double area = (box.x1 - box.x0) * (box.y1 - box.y0);
            const double expected = integrate_rectangle(f, box, bin_quad).value / area;
            const double z = (h.density[idx] - expected) / h.std_error[idx];
            ++tested;
            if (std::abs(z) <= kZLimit) ++within;
            worst = std::max(worst, std::abs(z));
        }
    }
    const double fraction = tested > 0 ? static_cast<double>(within) / tested : 0.0;
    const bool bad = tested == 0 || fraction < kMinBinPassFraction;
    flagged = flagged || bad;
    return {{"boundary", side == Boundary::horizontal ? "horizontal" : "slanted"},
            {"bins_tested", tested},
            {"bins_within_3_sigma", within},
            {"fraction_within", fraction},
            {"max_abs_z", worst},
            {"flagged", bad}};
}

Json validate_scenario(const Scenario& s, const Options& o, bool& flagged) {
    const PairModel pair = pair_of(s, o);
    const double maturity = s.cds ? s.cds->maturity : s.ftd->maturity;
    Json j = header_fields("validate", o);
    j["seed"] = s.monte_carlo.seed;
    j["n_paths"] = s.monte_carlo.n_paths;
    j["steps_per_year"] = s.monte_carlo.steps_per_year;
    j["bridge_correction"] = s.monte_carlo.bridge_correction;

    const WedgeDensityParams p{pair.wedge, s.pricing.series, s.pricing.exponent, maturity};
    const PartitionCheck part = normalization_check(maturity, p, s.pricing.quad);
    const double deviation = part.sum() - 1.0;
    const bool part_bad = !(std::abs(deviation) <= kPartitionTol);
    flagged = flagged || part_bad;
    j["normalization"] = {{"counterparty_first", part.counterparty_first.value},
                          {"underlying_first", part.underlying_first.value},
                          {"survival", part.survival.value},
                          {"deviation", deviation},
                          {"flagged", part_bad}};

    McScenario mc{s.underlying, s.counterparty, s.market, {}, {}, s.pricing.fees};
    Json legs;
    if (s.cds) {
        mc.cds = *s.cds;
        mc.ftd = {s.cds->notional, s.cds->recovery_underlying, s.cds->maturity};
        const McLegs m = mc_legs(mc, s.monte_carlo);
        const LegValue ds = standard_default_leg(pair, mc.cds, s.pricing);
        const LegValue dc = counterparty_default_leg(pair, mc.cds, s.pricing);
        const LegValue fee = fee_leg(pair, mc.cds, s.pricing);
        legs["standard_default_leg"] = compare(ds.value, ds.error_estimate, m.standard_default, flagged);
        legs["counterparty_default_leg"] = compare(dc.value, dc.error_estimate, m.counterparty_default, flagged);
        legs["fee_leg"] = compare(fee.value, fee.error_estimate, m.fee, flagged);
        legs["fair_value"] = compare(ds.value + dc.value - fee.value,
                                     ds.error_estimate + dc.error_estimate + fee.error_estimate, m.fair_value,
                                     flagged);
    } else {
        mc.ftd = *s.ftd;
        mc.cds = {s.ftd->notional, s.ftd->recovery, s.ftd->recovery, 0.0, s.ftd->maturity};
        const McLegs m = mc_legs(mc, s.monte_carlo);
        const LegValue d = ftd_default_leg(pair, mc.ftd, s.pricing);
        const double spread = ftd_fair_spread(pair, mc.ftd, s.pricing);
        legs["ftd_default_leg"] = compare(d.value, d.error_estimate, m.ftd_default, flagged);
        legs["ftd_fair_spread"] = compare(spread, 0.0, m.ftd_spread, flagged);
    }
    j["legs"] = legs;
    j["histograms"] = Json::array({histogram_check(Boundary::horizontal, s, pair, maturity, flagged),
                                   histogram_check(Boundary::slanted, s, pair, maturity, flagged)});
    j["flagged"] = flagged;
    return j;
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
    if (o.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.output);
    if (!file) throw ScenarioError(o.output, 0, "--output", "cannot open output file");
    file << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-firm structural credit pricing: CDS with counterparty risk and first-to-default swaps"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Options o;

    auto common = [&o](CLI::App* cmd) {
        cmd->add_option("--scenario", o.scenario, "YAML scenario file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--seed", o.seed, "Monte Carlo seed (overrides the scenario)");
        cmd->add_option("--tol", o.tol, "Relative quadrature tolerance (overrides the scenario)");
        cmd->add_option("--output", o.output, "Write the result to this file instead of stdout");
        // deliberately corrupts the closed-form wedge; exercised by the validation tests
        cmd->add_option("--perturb-wedge-angle", o.perturb_wedge_angle)->group("");
    };
    CLI::App* cds = app.add_subcommand("price-cds", "Legs, fair value and par spread of a CDS");
    CLI::App* ftd = app.add_subcommand("price-ftd", "Default leg and fair spread of a first-to-default swap");
    CLI::App* density = app.add_subcommand("density", "CSV dump of hitting and survival densities");
    CLI::App* validate = app.add_subcommand("validate", "Closed form against Monte Carlo, with z-scores");
    for (CLI::App* cmd : {cds, ftd, density, validate}) common(cmd);
    density->add_option("--t-grid", o.t_grid, "Times as start:stop:count");
    density->add_option("--space-grid", o.space_grid, "Wedge coordinates as start:stop:count");
    validate->add_option("--paths", o.paths, "Number of Monte Carlo paths (overrides the scenario)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    const ReportFormat format = o.format == "json" ? ReportFormat::json : ReportFormat::text;
    try {
        const Scenario s = load(o);
        if (*density) {
            emit(density_csv(s, o), o, out);
            return kOk;
        }
        bool flagged = false;
        Json body;
        if (*cds) {
            body = price_cds(s, o);
        } else if (*ftd) {
            body = price_ftd(s, o);
        } else {
            body = validate_scenario(s, o, flagged);
        }
        std::ostringstream report;
        write_report(report, body, format);
        emit(report.str(), o, out);
        if (flagged) {
            err << "validation failed: at least one check exceeded its tolerance\n";
            return kValidationFailed;
        }
        return kOk;
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace paircredit::cli
