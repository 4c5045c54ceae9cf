#pragma once

namespace paircredit {

/// Truncation policy for the infinite Bessel series of the wedge densities.
struct SeriesTolerances {
    double term_tol = 1e-12;  ///< relative size of the neglected tail
    int max_terms = 4000;     ///< hard cap on the number of series terms

    void validate() const;
};

/// Standard normal cumulative distribution function.
[[nodiscard]] double normal_cdf(double x);

/// ln N(x), accurate far into the lower tail where N(x) underflows.
[[nodiscard]] double log_normal_cdf(double x);

/// Modified Bessel function of the first kind I_order(x), order > -1, x >= 0
/// (x > 0 for negative orders).
/// Throws OverflowSignal when the value exceeds the double range.
[[nodiscard]] double bessel_i(double order, double x);

/// ln I_order(x) for order > -1 and x > 0. Never overflows.
[[nodiscard]] double log_bessel_i(double order, double x);

/// Exponentially scaled exp(-x) * I_order(x); bounded by 1 for every argument.
[[nodiscard]] double bessel_i_scaled(double order, double x);

}  // namespace paircredit
