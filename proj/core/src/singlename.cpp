#include "paircredit/singlename.hpp"

#include <algorithm>
#include <cmath>

#include "paircredit/errors.hpp"
#include "paircredit/specfun.hpp"

namespace paircredit {

namespace {

// coeff * exp(log_factor) * N(arg), without forming an overflowing exponential.
double scaled_cdf_term(double coeff, double log_factor, double arg) {
    if (coeff == 0.0) return 0.0;
    return coeff * std::exp(log_factor + log_normal_cdf(arg));
}

}  // namespace

SingleNameCoeffs make_single_name_coeffs(const FirmParams& underlying, const MarketParams& market) {
    validate(market);
    detail::require(underlying.sigma > 0.0, "underlying sigma must be positive");
    SingleNameCoeffs c;
    c.nu1 = drift_nu(underlying, market);
    c.sigma1 = underlying.sigma;
    c.beta = c.nu1 / c.sigma1;
    c.rate_alpha = std::sqrt(c.beta * c.beta + 2.0 * market.rate);
    return c;
}

double conditional_default_prob(double mu, double horizon, const SingleNameCoeffs& c) {
    detail::require(mu >= 0.0, "conditional_default_prob: mu must be non-negative");
    detail::require(horizon > 0.0, "conditional_default_prob: horizon must be positive");
    const double root = std::sqrt(horizon);
    const double p = normal_cdf((-mu - c.beta * horizon) / root) +
                     scaled_cdf_term(1.0, -2.0 * c.beta * mu, (-mu + c.beta * horizon) / root);
    return std::clamp(p, 0.0, 1.0);
}

double gaussian_exp_integral(double a, double b, double c, double y) {
    detail::require(b < 0.0, "gaussian_exp_integral: b must be negative");
    detail::require(y > 0.0, "gaussian_exp_integral: upper limit must be positive");
    const double disc = c * c - 2.0 * a;
    if (!(disc > 0.0)) throw DomainError("gaussian_exp_integral: requires c^2 > 2a");
    const double d = std::sqrt(disc);
    const double root = std::sqrt(y);
    return scaled_cdf_term((d + c) / (2.0 * d), b * (c - d), (b - d * y) / root) +
           scaled_cdf_term((d - c) / (2.0 * d), b * (c + d), (b + d * y) / root);
}

double discounted_hitting_factor(double mu, double horizon, const SingleNameCoeffs& c) {
    detail::require(mu >= 0.0, "discounted_hitting_factor: mu must be non-negative");
    detail::require(horizon > 0.0, "discounted_hitting_factor: horizon must be positive");
    const double root = std::sqrt(horizon);
    const double a = c.rate_alpha;
    const double v = scaled_cdf_term(1.0, -mu * (c.beta - a), (-mu - a * horizon) / root) +
                     scaled_cdf_term(1.0, -mu * (c.beta + a), (-mu + a * horizon) / root);
    return std::clamp(v, 0.0, 1.0);
}

double cds_value_at_default(double mu, double t, const CdsContract& contract, const SingleNameCoeffs& c,
                            const MarketParams& market, FeeConvention fees) {
    detail::require(t >= 0.0 && t < contract.maturity, "cds_value_at_default: requires 0 <= t < maturity");
    detail::require(market.rate > 0.0, "cds_value_at_default: the fee leg requires a positive rate");
    const double r = market.rate;
    const double horizon = contract.maturity - t;
    const double annuity_ratio = contract.spread / r;
    const double hit = discounted_hitting_factor(mu, horizon, c);
    const double growth = std::exp(-r * horizon);
    double value = 0.0;
    if (fees == FeeConvention::exact) {
        const double survival = 1.0 - conditional_default_prob(mu, horizon, c);
        value = (1.0 - contract.recovery_underlying + annuity_ratio) * hit -
                annuity_ratio * (1.0 - growth * survival);
    } else {
        value = (1.0 - contract.recovery_underlying) * hit - annuity_ratio * (1.0 - growth);
    }
    // positive part of the time-t value, then discounted to 0
    return std::exp(-r * t) * contract.notional * std::max(0.0, value);
}

double h_tilde(double z, double t, const CdsContract& contract, const SingleNameCoeffs& c,
               const WedgeGeometry& wedge, const MarketParams& market, FeeConvention fees) {
    detail::require(z >= 0.0, "h_tilde: z must be non-negative");
    return cds_value_at_default(wedge.rho_complement() * z, t, contract, c, market, fees);
}

}  // namespace paircredit
