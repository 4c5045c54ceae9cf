// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "paircredit/errors.hpp"
#include "paircredit/jointlaw.hpp"
#include "paircredit/mc_oracle.hpp"
#include "paircredit/pricing.hpp"
#include "paircredit/singlename.hpp"
#include "paircredit/specfun.hpp"

using namespace paircredit;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

FirmParams make_firm(double y0, double sigma, double barrier_growth = 0.0) {
    return {100.0, 100.0 * std::exp(-y0), barrier_growth, sigma, 0.0};
}

// sigma1 = 0.2, sigma2 = 0.3, rho = 0.4, y01 = 0.8, y02 = 1.2, r = 5%, T = 5, s = 200bp, R = 40%
const FirmParams kUnderlying = make_firm(0.8, 0.2);
const FirmParams kCounterparty = make_firm(1.2, 0.3);
const MarketParams kMarket{0.05, 0.4};
const CdsContract kCds{1.0, 0.4, 0.4, 0.02, 5.0};
const FtdContract kFtd{1.0, 0.4, 5.0};

PricingSpec pricing() {
    PricingSpec s;
    s.quad.threads = 1;
    return s;
}

WedgeDensityParams density_params(const WedgeGeometry& w, double horizon) {
    return {w, {}, GirsanovExponent::hitting_time, horizon};
}

double zscore(double closed, double closed_err, const McEstimate& mc) {
    return (closed - mc.mean) / std::hypot(mc.std_error, closed_err);
}

Verdict ac1() {
    Verdict v;
    QuadSpec q;
    q.threads = 1;
    double worst = 0.0;
    for (double rho : {-0.5, 0.0, 0.3, 0.7}) {
        const WedgeGeometry w = derive_wedge(kUnderlying, kCounterparty, {kMarket.rate, rho});
        for (double T : {1.0, 5.0, 10.0}) {
            const double dev = normalization_check(T, density_params(w, T), q).sum() - 1.0;
            worst = std::max(worst, std::abs(dev));
            v.check(std::abs(dev) <= 2e-3, fmt("rho=%g T=%g deviation %.3e", rho, T, dev));
        }
    }
    if (v.pass) v.detail = fmt("max |sum - 1| = %.2e over 12 cases", worst);
    return v;
}

Verdict ac2() {
    Verdict v;
    const WedgeGeometry w = derive_wedge(kUnderlying, kCounterparty, kMarket);
    const WedgeDensityParams p = density_params(w, 10.0);
    double worst = 0.0;
    int compared = 0;
    for (int i = 0; i < 20; ++i) {
        const double t = 1.0 + 9.0 * i / 19.0;
        for (int k = 0; k < 20; ++k) {
            const double a = 0.5 + 7.5 * k / 19.0;
            const double series = hitting_density_horizontal(t, a, p);
            const double gradient = hitting_density_from_gradient(t, a, p);
            const double rel = std::abs(gradient - series) / series;
            ++compared;
            worst = std::max(worst, rel);
            v.check(series > 0.0 && rel <= 1e-4, fmt("t=%g a=%g series %.10e gradient %.10e", t, a, series, gradient));
        }
    }
    if (v.pass) v.detail = fmt("%d points, max relative gap %.2e", compared, worst);
    return v;
}

Verdict ac3() {
    Verdict v;
    QuadSpec q;
    q.threads = 1;
    q.rel_tol = 1e-9;
    q.abs_tol = 1e-12;
    struct Case {
        double y1, s1, g1, y2, s2, g2, r, T;
    };
    const Case cases[] = {{0.8, 0.2, 0.0, 1.2, 0.3, 0.0, 0.05, 5.0},
                          {0.5, 0.25, 0.02, 0.9, 0.15, -0.01, 0.03, 2.0},
                          {1.5, 0.35, -0.02, 0.6, 0.2, 0.03, 0.04, 10.0},
                          {0.3, 0.1, 0.0, 0.4, 0.4, 0.0, 0.01, 1.0},
                          {1.0, 0.3, 0.05, 2.0, 0.25, 0.0, 0.06, 7.0}};
    double worst = 0.0;
    for (const Case& c : cases) {
        const FirmParams f1 = make_firm(c.y1, c.s1, c.g1), f2 = make_firm(c.y2, c.s2, c.g2);
        const MarketParams m{c.r, 0.0};
        const double joint = survival_prob(c.T, density_params(derive_wedge(f1, f2, m), c.T), q).value;
        const double one = 1.0 - conditional_default_prob(c.y1 / c.s1, c.T, make_single_name_coeffs(f1, m));
        const double two = 1.0 - conditional_default_prob(c.y2 / c.s2, c.T, make_single_name_coeffs(f2, m));
        const double gap = std::abs(joint - one * two);
        worst = std::max(worst, gap);
        v.check(gap <= 1e-6, fmt("y=(%g,%g) joint %.10f product %.10f", c.y1, c.y2, joint, one * two));
    }
    if (v.pass) v.detail = fmt("max gap %.2e over 5 sets", worst);
    return v;
}

struct OracleRun {
    McLegs mc;
    double seconds = 0.0;
};

const OracleRun& oracle() {
    static const OracleRun run = [] {
        McConfig cfg;
        cfg.n_paths = 10'000'000;
        cfg.steps_per_year = 2000;
        cfg.bridge_correction = true;
        const auto start = std::chrono::steady_clock::now();
        OracleRun r;
        r.mc = mc_legs({kUnderlying, kCounterparty, kMarket, kCds, kFtd, FeeConvention::exact}, cfg);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    }();
    return run;
}

Verdict ac4() {
    Verdict v;
    const McLegs& mc = oracle().mc;
    auto legs = [&](GirsanovExponent exponent) {
        PricingSpec spec = pricing();
        spec.exponent = exponent;
        const PairModel pair = make_pair_model(kUnderlying, kCounterparty, kMarket);
        const LegValue ds = standard_default_leg(pair, kCds, spec);
        const LegValue fee = fee_leg(pair, kCds, spec);
        const LegValue ftd = ftd_default_leg(pair, kFtd, spec);
        return std::vector<double>{zscore(ds.value, ds.error_estimate, mc.standard_default),
                                   zscore(fee.value, fee.error_estimate, mc.fee),
                                   zscore(ftd.value, ftd.error_estimate, mc.ftd_default)};
    };
    const char* names[] = {"D_s", "F", "D_ftd"};
    const auto z = legs(GirsanovExponent::hitting_time);
    for (int i = 0; i < 3; ++i) v.check(std::abs(z[i]) <= 3.0, fmt("%s z=%.2f", names[i], z[i]));
    const auto zT = legs(GirsanovExponent::horizon_on_slanted);
    double worst_T = 0.0;
    for (double x : zT) worst_T = std::max(worst_T, std::abs(x));
    v.check(worst_T > 3.0, fmt("negative control: maturity-time exponent not rejected (max |z|=%.2f)", worst_T));
    if (v.pass) {
        v.detail = fmt("z: D_s %.2f, F %.2f, D_ftd %.2f; maturity-time variant max |z| %.1f; 1e7 paths in %.0f s",
                       z[0], z[1], z[2], worst_T, oracle().seconds);
    }
    return v;
}

Verdict ac5() {
    Verdict v;
    const LegValue dc = counterparty_default_leg(make_pair_model(kUnderlying, kCounterparty, kMarket), kCds, pricing());
    const McEstimate& mc = oracle().mc.counterparty_default;
    const double z = zscore(dc.value, dc.error_estimate, mc);
    v.check(std::abs(z) <= 3.0, fmt("closed %.8e mc %.8e +- %.2e z=%.2f", dc.value, mc.mean, mc.std_error, z));
    if (v.pass) v.detail = fmt("closed %.6e, mc %.6e +- %.1e, z=%.2f", dc.value, mc.mean, mc.std_error, z);
    return v;
}

double gaussian_exp_density(double a, double b, double c, double x) {
    const double z = (b - c * x) / std::sqrt(x);
    const double dz = -b / (2.0 * x * std::sqrt(x)) - c / (2.0 * std::sqrt(x));
    return std::exp(a * x - 0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi) * dz;
}

Verdict ac6() {
    Verdict v;
    const FirmParams firm = make_firm(1.0, 0.25, 0.02);
    const MarketParams m{0.05, 0.0};
    const SingleNameCoeffs c = make_single_name_coeffs(firm, m);
    McConfig cfg;
    cfg.n_paths = 1'000'000;
    double worst = 0.0;
    const std::pair<double, double> points[] = {{0.5, 1.0}, {1.0, 3.0}, {2.0, 5.0}, {3.0, 10.0}, {1.5, 0.5}};
    for (const auto& [mu, horizon] : points) {
        const SingleNameMc est = mc_single_name(firm, m, mu, horizon, cfg);
        const double zp = zscore(conditional_default_prob(mu, horizon, c), 0.0, est.default_prob);
        const double zd = zscore(discounted_hitting_factor(mu, horizon, c), 0.0, est.discounted_factor);
        worst = std::max({worst, std::abs(zp), std::abs(zd)});
        v.check(std::abs(zp) <= 3.0, fmt("default prob mu=%g h=%g z=%.2f", mu, horizon, zp));
        v.check(std::abs(zd) <= 3.0, fmt("discounted factor mu=%g h=%g z=%.2f", mu, horizon, zd));
    }
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> ua(-0.2, 0.1), ub(-3.0, -0.05), uc(-0.5, 0.8), uy(0.05, 12.0);
    double worst_gap = 0.0;
    for (int checked = 0; checked < 100;) {
        const double a = ua(gen), b = ub(gen), cc = uc(gen), y = uy(gen);
        if (cc * cc - 2 * a <= 1e-3) continue;
        const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double x) { return gaussian_exp_density(a, b, cc, x); }, 0.0, y, 30, 1e-13);
        const double gap = std::abs(gaussian_exp_integral(a, b, cc, y) - ref);
        worst_gap = std::max(worst_gap, gap);
        v.check(gap <= 1e-8, fmt("a=%g b=%g c=%g y=%g gap %.2e", a, b, cc, y, gap));
        ++checked;
    }
    if (v.pass) v.detail = fmt("max |z| %.2f on 5 points; max integral gap %.1e on 100 triples", worst, worst_gap);
    return v;
}

Verdict ac7() {
    Verdict v;
    double worst = 0.0;
    for (double nu = 0.5; nu <= 10.0 + 1e-12; nu += 0.25) {
        for (double x = 0.1; x <= 30.0; x *= 1.15) {
            const double rhs = 2.0 * nu / x * bessel_i(nu, x);
            const double rel = std::abs(bessel_i(nu - 1.0, x) - bessel_i(nu + 1.0, x) - rhs) / rhs;
            worst = std::max(worst, rel);
            v.check(rel < 1e-8, fmt("recurrence nu=%g x=%g rel %.2e", nu, x, rel));
        }
    }
    double worst_half = 0.0;
    for (double x = 0.05; x <= 50.0; x *= 1.3) {
        const double pre = std::sqrt(2.0 / (std::numbers::pi * x));
        const double exact[] = {pre * std::cosh(x), pre * std::sinh(x), pre * (std::cosh(x) - std::sinh(x) / x)};
        const double order[] = {-0.5, 0.5, 1.5};
        for (int i = 0; i < 3; ++i) {
            const double rel = std::abs(bessel_i(order[i], x) - exact[i]) / exact[i];
            worst_half = std::max(worst_half, rel);
            v.check(rel <= 1e-12, fmt("I_%g(%g) rel %.2e", order[i], x, rel));
        }
    }
    double worst_sym = 0.0;
    for (double x = 0.0; x <= 8.0; x += 0.01) {
        const double gap = std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0);
        worst_sym = std::max(worst_sym, gap);
        v.check(gap <= 1e-15, fmt("normal_cdf symmetry at %g: %.2e", x, gap));
    }
    if (v.pass) v.detail = fmt("recurrence %.1e, half-integer %.1e, symmetry %.1e", worst, worst_half, worst_sym);
    return v;
}

Verdict ac8() {
    Verdict v;
    const PricingSpec spec = pricing();
    const PairModel pair = make_pair_model(kUnderlying, kCounterparty, kMarket);
    const double grid[] = {0.0, 0.2, 0.4, 0.6, 0.8};
    LegValue dc[5][5];
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            CdsContract c = kCds;
            c.recovery_underlying = grid[i];
            c.recovery_counterparty = grid[j];
            dc[i][j] = counterparty_default_leg(pair, c, spec);
        }
    }
    // adjacent values may differ by at most their quadrature error in the wrong direction
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            if (i + 1 < 5) {
                const double slack = dc[i][j].error_estimate + dc[i + 1][j].error_estimate;
                v.check(dc[i + 1][j].value <= dc[i][j].value + slack, fmt("D_c increases in R_u at R_c=%g", grid[j]));
            }
            if (j + 1 < 5) {
                const double slack = dc[i][j].error_estimate + dc[i][j + 1].error_estimate;
                v.check(dc[i][j + 1].value <= dc[i][j].value + slack, fmt("D_c increases in R_c at R_u=%g", grid[i]));
            }
        }
    }
    double prev = 0.0;
    for (int k = 0; k <= 10; ++k) {
        CdsContract c = kCds;
        c.spread = 0.01 * k;
        const double fv = cds_fair_value(pair, c, spec);
        if (k > 0) v.check(fv < prev, fmt("fair value not decreasing at s=%g", c.spread));
        prev = fv;
    }
    CdsContract riskless_cpty = kCds;
    riskless_cpty.recovery_counterparty = 1.0;
    const double par = cds_par_spread(pair, riskless_cpty, spec).spread;
    const double ftd = ftd_fair_spread(pair, {1.0, kCds.recovery_underlying, kCds.maturity}, spec);
    v.check(ftd >= par, fmt("ftd spread %.6e below par spread %.6e", ftd, par));
    if (v.pass) v.detail = fmt("D_c grid monotone; fair value decreasing; ftd %.5f >= par %.5f", ftd, par);
    return v;
}

std::string read_body(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    std::stringstream rest;
    rest << in.rdbuf();
    return rest.str();
}

Verdict ac9() {
    Verdict v;
#if defined(PAIRCREDIT_CLI) && defined(PAIRCREDIT_TEST_DATA)
    const auto dir = std::filesystem::temp_directory_path();
    std::vector<std::string> bodies;
    for (int run = 0; run < 2; ++run) {
        const auto out = dir / ("paircredit_ac9_" + std::to_string(run) + ".txt");
        const std::string cmd = std::string("\"") + PAIRCREDIT_CLI + "\" validate --scenario \"" +
                                PAIRCREDIT_TEST_DATA + "/reference_scenario.yaml\" --seed 4242 --output \"" +
                                out.string() + "\"";
        const int status = std::system(cmd.c_str());
        v.check(status == 0, fmt("validate run %d exited with status %d", run, status));
        bodies.push_back(read_body(out));
    }
    v.check(!bodies[0].empty() && bodies[0] == bodies[1], "validate report bodies differ");
#else
    v.check(false, "command-line tool not built");
#endif
    const WedgeGeometry w = derive_wedge(kUnderlying, kCounterparty, kMarket);
    const PairModel pair = make_pair_model(kUnderlying, kCounterparty, kMarket);
    std::vector<double> surv, dc;
    for (int threads : {1, 2, 4}) {
        QuadSpec q;
        q.threads = threads;
        surv.push_back(survival_prob(5.0, density_params(w, 5.0), q).value);
        PricingSpec spec;
        spec.quad.threads = threads;
        dc.push_back(counterparty_default_leg(pair, kCds, spec).value);
    }
    for (int i = 1; i < 3; ++i) {
        v.check(std::abs(surv[i] - surv[0]) <= 1e-12 * std::abs(surv[0]), "survival probability depends on threads");
        v.check(std::abs(dc[i] - dc[0]) <= 1e-12 * std::abs(dc[0]), "counterparty leg depends on threads");
    }
    if (v.pass) v.detail = "report bodies identical; quadrature identical for 1, 2, 4 threads";
    return v;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"AC-1 partition of unity", ac1},
        {"AC-2 gradient vs series hitting density", ac2},
        {"AC-3 zero-correlation factorization", ac3},
        {"AC-4 joint law vs Monte Carlo", ac4},
        {"AC-5 counterparty leg vs Monte Carlo", ac5},
        {"AC-6 single-name formulas", ac6},
        {"AC-7 special functions", ac7},
        {"AC-8 financial sanity grid", ac8},
        {"AC-9 determinism", ac9},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (v.detail.size() > 600) v.detail = v.detail.substr(0, 600) + " ...";
        std::printf("%s %-42s (%6.1f s) %s\n", v.pass ? "PASS" : "FAIL", name, secs, v.detail.c_str());
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
