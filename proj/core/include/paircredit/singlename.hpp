#pragma once

#include "paircredit/model.hpp"

namespace paircredit {

/// Coefficients of the one-firm first-passage formulas for the underlying.
/// Distances are expressed in volatility units, mu = ln(V1/v1) / sigma1.
struct SingleNameCoeffs {
    double nu1 = 0.0;         ///< drift of ln(V1/v1)
    double rate_alpha = 0.0;  ///< sqrt(nu1^2 / sigma1^2 + 2 r)
    double beta = 0.0;        ///< nu1 / sigma1
    double sigma1 = 0.0;
};

[[nodiscard]] SingleNameCoeffs make_single_name_coeffs(const FirmParams& underlying, const MarketParams& market);

/// How the fee leg inside the post-default CDS value is truncated.
enum class FeeConvention {
    exact,          ///< fees stop at the underlying's default
    unconditional,  ///< fees always run to maturity (first-order shortcut)
};

/// P(tau1 <= t + horizon | alive at t with scaled distance mu).
[[nodiscard]] double conditional_default_prob(double mu, double horizon, const SingleNameCoeffs& c);

/// int_0^y e^{a x} dN((b - c x) / sqrt(x)) for b < 0 and c^2 > 2a.
[[nodiscard]] double gaussian_exp_integral(double a, double b, double c, double y);

/// E[exp(-r (tau1 - t)) 1{tau1 < t + horizon}] from scaled distance mu.
[[nodiscard]] double discounted_hitting_factor(double mu, double horizon, const SingleNameCoeffs& c);

/// Value, discounted to 0, of the positive part of the CDS market value at
/// the counterparty's default time t < maturity when the underlying sits at
/// scaled distance mu. Includes the notional.
[[nodiscard]] double cds_value_at_default(double mu, double t, const CdsContract& contract,
                                          const SingleNameCoeffs& c, const MarketParams& market,
                                          FeeConvention fees = FeeConvention::exact);

/// cds_value_at_default expressed in the wedge coordinate z = Z1 on the
/// horizontal side: mu = sqrt(1 - rho^2) * z.
[[nodiscard]] double h_tilde(double z, double t, const CdsContract& contract, const SingleNameCoeffs& c,
                             const WedgeGeometry& wedge, const MarketParams& market,
                             FeeConvention fees = FeeConvention::exact);

}  // namespace paircredit
