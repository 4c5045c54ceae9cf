#pragma once

#include <string_view>

namespace paircredit {

/// One default-prone firm in the structural model.
///
/// The firm value follows dV/V = (r - payout) dt + sigma dB under the pricing
/// measure and the firm defaults the first time V falls to the barrier
/// barrier * exp(barrier_growth * t). All rates are annualized.
struct FirmParams {
    double v0 = 0.0;              ///< initial firm value
    double barrier = 0.0;         ///< barrier level K at t = 0
    double barrier_growth = 0.0;  ///< barrier growth rate gamma (1/year)
    double sigma = 0.0;           ///< volatility (1/sqrt(year))
    double payout = 0.0;          ///< payout ratio k (1/year)

    /// ln(v0 / barrier); positive for a firm that is alive today.
    [[nodiscard]] double log_distance() const;
};

struct MarketParams {
    double rate = 0.0;         ///< constant short rate r
    double correlation = 0.0;  ///< correlation of the two driving Brownian motions
};

/// Single-name CDS bought from a default-prone protection seller.
struct CdsContract {
    double notional = 1.0;
    double recovery_underlying = 0.4;
    double recovery_counterparty = 0.4;
    double spread = 0.0;  ///< continuously paid fee rate (1/year)
    double maturity = 0.0;
};

/// First-to-default swap on the two firms.
struct FtdContract {
    double notional = 1.0;
    double recovery = 0.4;
    double maturity = 0.0;
};

/// The pair of firms mapped to a drifted planar Brownian motion Z living in a
/// wedge {0 < angle < wedge_angle}. The counterparty (firm 2) defaults on the
/// horizontal side Z2 = 0, the underlying (firm 1) on the ray at wedge_angle.
struct WedgeGeometry {
    double r0 = 0.0;           ///< |Z(0)|
    double theta0 = 0.0;       ///< arg Z(0), strictly inside (0, wedge_angle)
    double wedge_angle = 0.0;  ///< arcsin(rho) + pi/2
    double phi1 = 0.0;         ///< drift of Z1
    double phi2 = 0.0;         ///< drift of Z2
    double nu1 = 0.0;          ///< log-distance drift of firm 1
    double nu2 = 0.0;          ///< log-distance drift of firm 2
    double y01 = 0.0;          ///< ln(V1(0)/K1)
    double y02 = 0.0;          ///< ln(V2(0)/K2)
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double rho = 0.0;

    [[nodiscard]] double z1_start() const;
    [[nodiscard]] double z2_start() const;
    [[nodiscard]] double drift_norm_sq() const { return phi1 * phi1 + phi2 * phi2; }
    /// sqrt(1 - rho^2), which is also sin(wedge_angle).
    [[nodiscard]] double rho_complement() const;
};

/// Log-distances to the barriers (ln(V1/v1), ln(V2/v2)) of a planar point.
struct LogDistances {
    double underlying = 0.0;
    double counterparty = 0.0;
};

void validate(const FirmParams& firm, std::string_view label);
void validate(const MarketParams& market);
void validate(const CdsContract& contract);
void validate(const FtdContract& contract);

/// nu = r - k - gamma - sigma^2 / 2: drift of ln(V / barrier).
[[nodiscard]] double drift_nu(const FirmParams& firm, const MarketParams& market);

/// Change of coordinates from the two firm values to the wedge process.
/// Throws DomainError when a firm starts at or below its barrier or |rho| >= 1.
[[nodiscard]] WedgeGeometry derive_wedge(const FirmParams& underlying, const FirmParams& counterparty,
                                         const MarketParams& market);

/// Inverse of the linear part of the transform (no drift, no time).
[[nodiscard]] LogDistances log_distances_at(const WedgeGeometry& wedge, double z1, double z2);

}  // namespace paircredit
