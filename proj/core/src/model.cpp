#include "paircredit/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "paircredit/errors.hpp"

namespace paircredit {

namespace {

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

double FirmParams::log_distance() const { return std::log(v0 / barrier); }

double WedgeGeometry::z1_start() const { return r0 * std::cos(theta0); }
double WedgeGeometry::z2_start() const { return r0 * std::sin(theta0); }
double WedgeGeometry::rho_complement() const { return std::sqrt(1.0 - rho * rho); }

void validate(const FirmParams& firm, std::string_view label) {
    const std::string name(label);
    if (!finite_all({firm.v0, firm.barrier, firm.barrier_growth, firm.sigma, firm.payout}))
        throw DomainError("firm '" + name + "': parameters must be finite");
    if (firm.v0 <= 0.0) throw DomainError("firm '" + name + "': v0 must be positive");
    if (firm.barrier <= 0.0) throw DomainError("firm '" + name + "': barrier must be positive");
    if (firm.sigma <= 0.0) throw DomainError("firm '" + name + "': sigma must be positive");
    if (firm.v0 <= firm.barrier)
        throw DomainError("firm '" + name + "': starts at or below its barrier (v0 <= barrier)");
}

void validate(const MarketParams& market) {
    if (!finite_all({market.rate, market.correlation}))
        throw DomainError("market: parameters must be finite");
    if (market.rate < 0.0) throw DomainError("market: rate must be non-negative");
    if (!(std::abs(market.correlation) < 1.0))
        throw DomainError("market: correlation must lie strictly inside (-1, 1)");
}

void validate(const CdsContract& c) {
    if (!finite_all({c.notional, c.recovery_underlying, c.recovery_counterparty, c.spread, c.maturity}))
        throw DomainError("cds: parameters must be finite");
    if (c.notional <= 0.0) throw DomainError("cds: notional must be positive");
    if (c.recovery_underlying < 0.0 || c.recovery_underlying > 1.0)
        throw DomainError("cds: recovery_underlying must lie in [0, 1]");
    if (c.recovery_counterparty < 0.0 || c.recovery_counterparty > 1.0)
        throw DomainError("cds: recovery_counterparty must lie in [0, 1]");
    if (c.spread < 0.0) throw DomainError("cds: spread must be non-negative");
    if (c.maturity <= 0.0) throw DomainError("cds: maturity must be positive");
}

void validate(const FtdContract& c) {
    if (!finite_all({c.notional, c.recovery, c.maturity})) throw DomainError("ftd: parameters must be finite");
    if (c.notional <= 0.0) throw DomainError("ftd: notional must be positive");
    if (c.recovery < 0.0 || c.recovery > 1.0) throw DomainError("ftd: recovery must lie in [0, 1]");
    if (c.maturity <= 0.0) throw DomainError("ftd: maturity must be positive");
}

double drift_nu(const FirmParams& firm, const MarketParams& market) {
    return market.rate - firm.payout - firm.barrier_growth - 0.5 * firm.sigma * firm.sigma;
}

WedgeGeometry derive_wedge(const FirmParams& underlying, const FirmParams& counterparty,
                           const MarketParams& market) {
    validate(underlying, "underlying");
    validate(counterparty, "counterparty");
    validate(market);

    WedgeGeometry w;
    w.sigma1 = underlying.sigma;
    w.sigma2 = counterparty.sigma;
    w.rho = market.correlation;
    w.nu1 = drift_nu(underlying, market);
    w.nu2 = drift_nu(counterparty, market);
    w.y01 = underlying.log_distance();
    w.y02 = counterparty.log_distance();

    const double s = w.rho_complement();
    const double z1 = (w.y01 * w.sigma2 - w.rho * w.y02 * w.sigma1) / (w.sigma1 * w.sigma2 * s);
    const double z2 = w.y02 / w.sigma2;
    w.phi1 = (w.nu1 * w.sigma2 - w.nu2 * w.sigma1 * w.rho) / (w.sigma1 * w.sigma2 * s);
    w.phi2 = w.nu2 / w.sigma2;
    w.wedge_angle = std::asin(w.rho) + 0.5 * std::numbers::pi;
    w.r0 = std::hypot(z1, z2);
    w.theta0 = std::atan2(z2, z1);

    // Out-of-wedge starts are rejected, never clamped.
    if (!(w.r0 > 0.0) || !(w.theta0 > 0.0) || !(w.theta0 < w.wedge_angle))
        throw DomainError("starting point lies outside the wedge");
    return w;
}

LogDistances log_distances_at(const WedgeGeometry& wedge, double z1, double z2) {
    return {wedge.sigma1 * (wedge.rho_complement() * z1 + wedge.rho * z2), wedge.sigma2 * z2};
}

}  // namespace paircredit
