#include "paircredit/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "paircredit/errors.hpp"

namespace paircredit {

namespace {

constexpr double kLogMax = 709.0;
// Orders at or above this use the uniform (Debye) expansion for every argument.
constexpr double kUniformOrder = 12.0;
constexpr int kDebyeTerms = 14;

using Poly = std::vector<double>;

double eval_poly(const Poly& c, double p) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * p + *it;
    return acc;
}

// Debye polynomials u_k(p) from
//   u_{k+1}(p) = p^2 (1 - p^2) u_k'(p) / 2 + (1/8) int_0^p (1 - 5 t^2) u_k(t) dt.
const std::array<Poly, kDebyeTerms>& debye_polys() {
    static const std::array<Poly, kDebyeTerms> polys = [] {
        std::array<Poly, kDebyeTerms> u;
        u[0] = {1.0};
        for (int k = 0; k + 1 < kDebyeTerms; ++k) {
            const Poly& cur = u[k];
            Poly next(cur.size() + 3, 0.0);
            for (std::size_t j = 1; j < cur.size(); ++j) {
                const double d = 0.5 * static_cast<double>(j) * cur[j];  // p^{j-1} term of u_k'
                next[j + 1] += d;
                next[j + 3] -= d;
            }
            for (std::size_t j = 0; j < cur.size(); ++j) {
                next[j + 1] += 0.125 * cur[j] / static_cast<double>(j + 1);
                next[j + 3] -= 0.625 * cur[j] / static_cast<double>(j + 3);
            }
            u[k + 1] = std::move(next);
        }
        return u;
    }();
    return polys;
}

double log_series(double nu, double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    double log_scale = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double ratio = q / (k * (nu + k));
        term *= ratio;
        sum += term;
        if (sum > 1e280) {
            sum *= 1e-280;
            term *= 1e-280;
            log_scale += 280.0 * std::numbers::ln10;
        }
        if (ratio < 1.0 && term < 1e-17 * sum) break;
    }
    return nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) + std::log(sum) + log_scale;
}

double log_large_argument(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * x);
        const double mag = std::abs(term);
        if (mag > prev) break;  // asymptotic series: stop at the smallest term
        sum += term;
        if (mag < 1e-17 * std::abs(sum)) break;
        prev = mag;
    }
    return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

double log_uniform(double nu, double x) {
    const double z = x / nu;
    const double root = std::sqrt(1.0 + z * z);
    const double p = 1.0 / root;
    const double eta = root + std::log(z / (1.0 + root));
    const auto& u = debye_polys();
    double sum = 0.0;
    double scale = 1.0;
    for (int k = 0; k < kDebyeTerms; ++k) {
        sum += eval_poly(u[k], p) * scale;
        scale /= nu;
    }
    return nu * eta - 0.5 * std::log(2.0 * std::numbers::pi * nu) - 0.5 * std::log(root) + std::log(sum);
}

}  // namespace

void SeriesTolerances::validate() const {
    if (!(term_tol > 0.0)) throw DomainError("series term_tol must be positive");
    if (max_terms < 8) throw DomainError("series max_terms must be at least 8");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 * 0.5); }

double log_normal_cdf(double x) {
    if (x > -30.0) return std::log(normal_cdf(x));
    // Mills-ratio expansion: N(x) = phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
    const double inv2 = 1.0 / (x * x);
    const double series = 1.0 - inv2 * (1.0 - 3.0 * inv2 * (1.0 - 5.0 * inv2 * (1.0 - 7.0 * inv2)));
    return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double log_bessel_i(double order, double x) {
    detail::require(order > -1.0 && std::isfinite(order), "bessel order must be finite and above -1");
    detail::require(x > 0.0 && std::isfinite(x), "log_bessel_i requires a finite positive argument");
    if (order >= kUniformOrder) return log_uniform(order, x);
    if (x > std::max(30.0, 2.0 * order * order)) return log_large_argument(order, x);
    return log_series(order, x);
}

double bessel_i(double order, double x) {
    detail::require(order > -1.0 && std::isfinite(order), "bessel order must be finite and above -1");
    detail::require(x >= 0.0 && std::isfinite(x), "bessel argument must be finite and non-negative");
    detail::require(x > 0.0 || order >= 0.0, "bessel_i of negative order is singular at zero");
    if (x == 0.0) return order == 0.0 ? 1.0 : 0.0;
    const double lv = log_bessel_i(order, x);
    if (lv > kLogMax) throw OverflowSignal("bessel_i overflows; use log_bessel_i");
    return std::exp(lv);
}

double bessel_i_scaled(double order, double x) {
    if (x == 0.0) return order == 0.0 ? 1.0 : 0.0;
    return std::exp(log_bessel_i(order, x) - x);
}

}  // namespace paircredit
