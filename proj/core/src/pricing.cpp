#include "paircredit/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paircredit/errors.hpp"

namespace paircredit {

namespace {

WedgeDensityParams density_params(const PairModel& pair, const PricingSpec& spec, double maturity) {
    return {pair.wedge, spec.series, spec.exponent, maturity};
}

// (1 - e^{-r t}) / r, continuous annuity.
double annuity(double rate, double t) { return -std::expm1(-rate * t) / rate; }

QuadResult horizontal_integral(const PairModel& pair, const PricingSpec& spec, double maturity,
                               const std::function<double(double, double)>& payoff) {
    const WedgeDensityParams p = density_params(pair, spec, maturity);
    auto f = [&](double t, double a) {
        const double density = hitting_density_horizontal(t, a, p);
        return density == 0.0 ? 0.0 : payoff(t, a) * density;
    };
    return integrate_time_radius(f, maturity, radial_window(pair.wedge), spec.quad);
}

QuadResult slanted_integral(const PairModel& pair, const PricingSpec& spec, double maturity,
                            const std::function<double(double, double)>& payoff) {
    const WedgeDensityParams p = density_params(pair, spec, maturity);
    auto f = [&](double t, double mu) {
        const double density = hitting_density_slanted(t, mu, p);
        return density == 0.0 ? 0.0 : payoff(t, mu) * density;
    };
    return integrate_time_radius(f, maturity, radial_window(pair.wedge), spec.quad);
}

void check_cds(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec) {
    validate(pair.market);
    validate(contract);
    spec.validate();
}

// Fee leg per unit spread and notional, split into its three terms.
struct Annuities {
    QuadResult survival, underlying_first, counterparty_first;
};

Annuities risky_annuity(const PairModel& pair, double maturity, const PricingSpec& spec) {
    const double r = pair.market.rate;
    if (!(r > 0.0)) throw DomainError("fee leg requires a positive short rate");
    auto ann = [r](double t, double) { return annuity(r, t); };
    const WedgeDensityParams p = density_params(pair, spec, maturity);
    Annuities out;
    out.survival = survival_prob(maturity, p, spec.quad);
    out.survival.value *= annuity(r, maturity);
    out.survival.error_estimate *= annuity(r, maturity);
    out.underlying_first = slanted_integral(pair, spec, maturity, ann);
    out.counterparty_first = horizontal_integral(pair, spec, maturity, ann);
    return out;
}

double total(const Annuities& a) {
    return a.survival.value + a.underlying_first.value + a.counterparty_first.value;
}

double total_error(const Annuities& a) {
    return a.survival.error_estimate + a.underlying_first.error_estimate + a.counterparty_first.error_estimate;
}

// int int e^{-r t} h_s and int int e^{-r t} h_h.
std::pair<QuadResult, QuadResult> discounted_first_defaults(const PairModel& pair, double maturity,
                                                            const PricingSpec& spec) {
    const double r = pair.market.rate;
    auto discount = [r](double t, double) { return std::exp(-r * t); };
    return {slanted_integral(pair, spec, maturity, discount), horizontal_integral(pair, spec, maturity, discount)};
}

double counterparty_leg_value(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec,
                              double* error) {
    if (contract.recovery_counterparty == 1.0) {
        if (error) *error = 0.0;
        return 0.0;
    }
    const SingleNameCoeffs coeffs = make_single_name_coeffs(pair.underlying, pair.market);
    auto exposure = [&](double t, double a) {
        return h_tilde(a, t, contract, coeffs, pair.wedge, pair.market, spec.fees);
    };
    const QuadResult q = horizontal_integral(pair, spec, contract.maturity, exposure);
    const double loss = 1.0 - contract.recovery_counterparty;
    if (error) *error = loss * q.error_estimate;
    return loss * q.value;
}

}  // namespace

void PricingSpec::validate() const {
    quad.validate();
    series.validate();
}

PairModel make_pair_model(const FirmParams& underlying, const FirmParams& counterparty, const MarketParams& market) {
    return {underlying, counterparty, market, derive_wedge(underlying, counterparty, market)};
}

LegValue counterparty_default_leg(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec) {
    check_cds(pair, contract, spec);
    LegValue out;
    out.value = counterparty_leg_value(pair, contract, spec, &out.error_estimate);
    return out;
}

LegValue standard_default_leg(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec) {
    check_cds(pair, contract, spec);
    const double loss = contract.notional * (1.0 - contract.recovery_underlying);
    LegValue out;
    if (loss == 0.0) return out;
    const double r = pair.market.rate;
    const QuadResult q = slanted_integral(pair, spec, contract.maturity,
                                          [r](double t, double) { return std::exp(-r * t); });
    out.value = loss * q.value;
    out.error_estimate = loss * q.error_estimate;
    return out;
}

LegValue fee_leg(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec) {
    check_cds(pair, contract, spec);
    const Annuities a = risky_annuity(pair, contract.maturity, spec);
    const double scale = contract.spread * contract.notional;
    LegValue out;
    out.value = scale * total(a);
    out.error_estimate = scale * total_error(a);
    out.breakdown = {{"survival", scale * a.survival.value},
                     {"underlying_first", scale * a.underlying_first.value},
                     {"counterparty_first", scale * a.counterparty_first.value}};
    return out;
}

LegValue fee_leg_per_unit_spread(const PairModel& pair, double maturity, double notional, const PricingSpec& spec) {
    validate(pair.market);
    spec.validate();
    detail::require(maturity > 0.0 && notional > 0.0, "maturity and notional must be positive");
    const Annuities a = risky_annuity(pair, maturity, spec);
    LegValue out;
    out.value = notional * total(a);
    out.error_estimate = notional * total_error(a);
    out.breakdown = {{"survival", notional * a.survival.value},
                     {"underlying_first", notional * a.underlying_first.value},
                     {"counterparty_first", notional * a.counterparty_first.value}};
    return out;
}

double cds_fair_value(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec) {
    return standard_default_leg(pair, contract, spec).value + counterparty_default_leg(pair, contract, spec).value -
           fee_leg(pair, contract, spec).value;
}

ParSpread cds_par_spread(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec) {
    CdsContract c = contract;
    c.spread = 0.0;
    check_cds(pair, c, spec);
    // D_s and the fee leg per unit spread do not depend on s; only D_c does
    const double protection = standard_default_leg(pair, c, spec).value;
    const double per_spread = contract.notional * total(risky_annuity(pair, c.maturity, spec));
    auto value_at = [&](double s) {
        c.spread = s;
        return protection + counterparty_leg_value(pair, c, spec, nullptr) - s * per_spread;
    };

    ParSpread out;
    const double tol = spec.quad.abs_tol;
    double lo = 0.0;
    double f_lo = value_at(lo);
    if (std::abs(f_lo) < tol || f_lo < 0.0) {
        out.spread = 0.0;
        out.residual = f_lo;
        return out;
    }
    double hi = 1e-2;
    double f_hi = value_at(hi);
    while (f_hi > 0.0) {
        if (hi >= 1.0) throw NoRoot("no sign change of the CDS fair value for spreads up to 1");
        lo = hi;
        f_lo = f_hi;
        hi = std::min(2.0 * hi, 1.0);
        f_hi = value_at(hi);
    }
    double mid = hi;
    double f_mid = f_hi;
    for (int it = 0; it < 200; ++it) {
        out.iterations = it + 1;
        mid = 0.5 * (lo + hi);
        f_mid = value_at(mid);
        if (std::abs(f_mid) < tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
        if (f_mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.spread = mid;
    out.residual = f_mid;
    return out;
}

LegValue ftd_default_leg(const PairModel& pair, const FtdContract& contract, const PricingSpec& spec) {
    validate(pair.market);
    validate(contract);
    spec.validate();
    const double loss = contract.notional * (1.0 - contract.recovery);
    const auto [slanted, horizontal] = discounted_first_defaults(pair, contract.maturity, spec);
    LegValue out;
    out.value = loss * (slanted.value + horizontal.value);
    out.error_estimate = loss * (slanted.error_estimate + horizontal.error_estimate);
    out.breakdown = {{"underlying_first", loss * slanted.value}, {"counterparty_first", loss * horizontal.value}};
    return out;
}

double ftd_fair_spread(const PairModel& pair, const FtdContract& contract, const PricingSpec& spec) {
    const double protection = ftd_default_leg(pair, contract, spec).value;
    const double per_spread = fee_leg_per_unit_spread(pair, contract.maturity, contract.notional, spec).value;
    if (!(per_spread > 0.0)) throw DegenerateContract("fee leg per unit spread is zero");
    return protection / per_spread;
}

LegValue counterparty_default_leg(const FirmParams& underlying, const FirmParams& counterparty,
                                  const MarketParams& market, const CdsContract& contract, const PricingSpec& spec) {
    return counterparty_default_leg(make_pair_model(underlying, counterparty, market), contract, spec);
}

LegValue standard_default_leg(const FirmParams& underlying, const FirmParams& counterparty,
                              const MarketParams& market, const CdsContract& contract, const PricingSpec& spec) {
    return standard_default_leg(make_pair_model(underlying, counterparty, market), contract, spec);
}

LegValue fee_leg(const FirmParams& underlying, const FirmParams& counterparty, const MarketParams& market,
                 const CdsContract& contract, const PricingSpec& spec) {
    return fee_leg(make_pair_model(underlying, counterparty, market), contract, spec);
}

double cds_fair_value(const FirmParams& underlying, const FirmParams& counterparty, const MarketParams& market,
                      const CdsContract& contract, const PricingSpec& spec) {
    return cds_fair_value(make_pair_model(underlying, counterparty, market), contract, spec);
}

ParSpread cds_par_spread(const FirmParams& underlying, const FirmParams& counterparty, const MarketParams& market,
                         const CdsContract& contract, const PricingSpec& spec) {
    return cds_par_spread(make_pair_model(underlying, counterparty, market), contract, spec);
}

LegValue ftd_default_leg(const FirmParams& underlying, const FirmParams& counterparty, const MarketParams& market,
                         const FtdContract& contract, const PricingSpec& spec) {
    return ftd_default_leg(make_pair_model(underlying, counterparty, market), contract, spec);
}

double ftd_fair_spread(const FirmParams& underlying, const FirmParams& counterparty, const MarketParams& market,
                       const FtdContract& contract, const PricingSpec& spec) {
    return ftd_fair_spread(make_pair_model(underlying, counterparty, market), contract, spec);
}

}  // namespace paircredit
