#include "paircredit/jointlaw.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>

#include "paircredit/errors.hpp"

namespace paircredit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogUnderflow = -745.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Bessel argument above which short-time hitting densities try the half-plane form.
constexpr double kHalfPlaneSwitch = 500.0;

std::atomic<std::uint64_t> g_clips{0};

enum class SeriesKind { horizontal, slanted, interior };

double log_girsanov(double x, double y, double t, const WedgeGeometry& w) {
    return w.phi1 * (x - w.z1_start()) + w.phi2 * (y - w.z2_start()) - 0.5 * w.drift_norm_sq() * t;
}

// Sum over n >= 1 of c_n * exp(-x) I_{n pi / alpha}(x), where c_n is
//   horizontal: n sin(n pi theta0 / alpha)
//   slanted:    (-1)^{n+1} n sin(n pi theta0 / alpha)
//   interior:   sin(n pi theta / alpha) sin(n pi theta0 / alpha)
// The n = 0 term vanishes identically. Truncation uses the envelope
// e_n = w_n exp(-x) I_{n pi/alpha}(x) (w_n = n or 1), which is log-concave in n:
// once it decreases with ratio q, the tail is at most e_n q / (1 - q).
double wedge_series(SeriesKind kind, double x, double theta, const WedgeGeometry& w, const SeriesTolerances& tol) {
    const double step = kPi / w.wedge_angle;
    double sum = 0.0;
    double abs_sum = 0.0;
    double prev_env = 0.0;
    for (int n = 1;; ++n) {
        if (n > tol.max_terms) {
            throw SeriesNoConvergence("wedge Bessel series did not converge within max_terms");
        }
        const double order = n * step;
        const double scaled = bessel_i_scaled(order, x);
        const double weight = kind == SeriesKind::interior ? 1.0 : static_cast<double>(n);
        const double env = weight * scaled;
        double coeff = std::sin(order * w.theta0);
        switch (kind) {
            case SeriesKind::horizontal:
                coeff *= n;
                break;
            case SeriesKind::slanted:
                coeff *= (n % 2 == 1) ? n : -n;
                break;
            case SeriesKind::interior:
                coeff *= std::sin(order * theta);
                break;
        }
        const double term = coeff * scaled;
        sum += term;
        abs_sum += std::abs(term);
        if (n > 1 && env < prev_env) {
            const double q = env / prev_env;
            const double tail = env * q / (1.0 - q);
            // relative to the sum itself, down to the rounding floor set by cancellation
            const double scale = std::max(tol.term_tol * std::abs(sum), kEps * abs_sum);
            if (tail <= std::max(scale, std::numeric_limits<double>::min())) break;
        } else if (env == 0.0 && prev_env == 0.0 && n > 1) {
            break;  // every remaining term underflows
        }
        prev_env = env;
    }
    return sum;
}

double finish(double series, double log_prefactor, double log_bound) {
    if (series == 0.0) return 0.0;
    const double value =
        std::copysign(std::exp(std::log(std::abs(series)) + log_prefactor), series);
    if (value < 0.0) {
        if (value < -1e-12) g_clips.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    // the half-plane comparison bound also caps cancellation noise
    return std::min(value, std::exp(log_bound));
}

// log of the hitting flux through the boundary of the half-plane that contains
// the wedge and shares the side through `p`; dominates the wedge flux.
double log_half_plane_flux(double distance, double px, double py, double t, const WedgeGeometry& w) {
    const double dx = px - w.z1_start(), dy = py - w.z2_start();
    return std::log(distance / (2.0 * kPi * t * t)) - (dx * dx + dy * dy) / (2.0 * t);
}

// Short times: the flux through one side equals the half-plane flux up to the
// paths that touch the other side first. By the strong Markov property those
// contribute at most P(reach the other line by t) * sup_{s <= t, q on the other
// side} of the half-plane flux from q, which for t <= D^2 / 4 is attained at
// s = t and |q - p| = D, the distance from p to the other side.
bool half_plane_suffices(double mu_r, double other_distance, double t, double log_flux, const WedgeGeometry& w,
                         const SeriesTolerances& tol) {
    const double d = w.wedge_angle >= 0.5 * kPi ? mu_r : mu_r * std::sin(w.wedge_angle);
    if (t > 0.25 * d * d) return false;
    const double log_correction = std::numbers::ln2 + log_normal_cdf(-other_distance / std::sqrt(t)) +
                                  std::log(d / (2.0 * kPi * t * t)) - d * d / (2.0 * t);
    return log_correction <= std::log(tol.term_tol) + log_flux;
}

double hitting_density(SeriesKind side, double t, double mu_r, const WedgeDensityParams& p) {
    const WedgeGeometry& w = p.wedge;
    if (t < kMinHittingTime) return 0.0;
    const double angle = side == SeriesKind::horizontal ? 0.0 : w.wedge_angle;
    const double px = mu_r * std::cos(angle), py = mu_r * std::sin(angle);
    const double clock = (side == SeriesKind::slanted && p.exponent == GirsanovExponent::horizon_on_slanted)
                             ? p.horizon
                             : t;
    const double log_weight = log_girsanov(px, py, t, w) - 0.5 * w.drift_norm_sq() * (clock - t);
    const double distance =
        side == SeriesKind::horizontal ? w.z2_start() : w.r0 * std::sin(w.wedge_angle - w.theta0);
    const double log_bound = log_half_plane_flux(distance, px, py, t, w) + log_weight;
    if (log_bound < kLogUnderflow) return 0.0;

    const double x = mu_r * w.r0 / t;
    if (x > kHalfPlaneSwitch) {
        const double other = side == SeriesKind::horizontal ? w.r0 * std::sin(w.wedge_angle - w.theta0) : w.z2_start();
        if (half_plane_suffices(mu_r, other, t, log_bound - log_weight, w, p.tol)) return std::exp(log_bound);
    }
    const double series = wedge_series(side, x, 0.0, w, p.tol);
    const double dr = mu_r - w.r0;
    const double log_prefactor = log_weight + std::log(kPi / (w.wedge_angle * w.wedge_angle * t * mu_r)) -
                                 dr * dr / (2.0 * t);
    return finish(series, log_prefactor, log_bound);
}

// Killed driftless density in polar form, without range checks, clipping or
// capping; valid as an analytic continuation slightly outside the wedge.
double survival_density_raw(double mu_r, double theta, double t, const WedgeDensityParams& p) {
    const WedgeGeometry& w = p.wedge;
    const double x = mu_r * w.r0 / t;
    const double series = wedge_series(SeriesKind::interior, x, theta, w, p.tol);
    if (series == 0.0) return 0.0;
    const double dr = mu_r - w.r0;
    const double log_prefactor = std::log(2.0 * mu_r / (w.wedge_angle * t)) - dr * dr / (2.0 * t);
    return std::copysign(std::exp(std::log(std::abs(series)) + log_prefactor), series);
}

void check_density_args(double mu_r, double t) {
    detail::require(t > 0.0, "density time must be positive");
    detail::require(mu_r > 0.0, "density radius must be positive");
}

}  // namespace

double girsanov_weight(double x, double y, double t, const WedgeGeometry& wedge) {
    detail::require(t >= 0.0, "girsanov_weight: t must be non-negative");
    return std::exp(log_girsanov(x, y, t, wedge));
}

double survival_density_q(double mu_r, double theta, double t, const WedgeDensityParams& p) {
    check_density_args(mu_r, t);
    const WedgeGeometry& w = p.wedge;
    if (theta <= 0.0 || theta >= w.wedge_angle) return 0.0;
    // killed density <= free Gaussian density (times the polar Jacobian)
    const double dx = mu_r * std::cos(theta) - w.z1_start(), dy = mu_r * std::sin(theta) - w.z2_start();
    const double log_bound = std::log(mu_r / (2.0 * kPi * t)) - (dx * dx + dy * dy) / (2.0 * t);
    if (log_bound < kLogUnderflow) return 0.0;
    const double x = mu_r * w.r0 / t;
    const double series = wedge_series(SeriesKind::interior, x, theta, w, p.tol);
    const double dr = mu_r - w.r0;
    const double log_prefactor = std::log(2.0 * mu_r / (w.wedge_angle * t)) - dr * dr / (2.0 * t);
    return finish(series, log_prefactor, log_bound);
}

double survival_density(double mu_r, double theta, double t, const WedgeDensityParams& p) {
    const double q = survival_density_q(mu_r, theta, t, p);
    if (q == 0.0) return 0.0;
    return q * girsanov_weight(mu_r * std::cos(theta), mu_r * std::sin(theta), t, p.wedge);
}

double hitting_density_horizontal(double t, double a, const WedgeDensityParams& p) {
    check_density_args(a, t);
    return hitting_density(SeriesKind::horizontal, t, a, p);
}

double hitting_density_slanted(double t, double mu_r, const WedgeDensityParams& p) {
    check_density_args(mu_r, t);
    return hitting_density(SeriesKind::slanted, t, mu_r, p);
}

RadialWindow radial_window(const WedgeGeometry& wedge) {
    return {wedge.r0, std::sqrt(wedge.drift_norm_sq()), wedge.theta0};
}

QuadResult survival_prob(double horizon, const WedgeDensityParams& p, const QuadSpec& spec) {
    detail::require(horizon > 0.0, "survival_prob: horizon must be positive");
    auto f = [&](double mu, double kappa) { return survival_density(mu, kappa, horizon, p); };
    return integrate_wedge(f, p.wedge.wedge_angle, radial_window(p.wedge), horizon, spec);
}

PartitionCheck normalization_check(double horizon, const WedgeDensityParams& p, const QuadSpec& spec) {
    detail::require(horizon > 0.0, "normalization_check: horizon must be positive");
    const RadialWindow window = radial_window(p.wedge);
    PartitionCheck out;
    out.counterparty_first = integrate_time_radius(
        [&](double t, double a) { return hitting_density_horizontal(t, a, p); }, horizon, window, spec);
    out.underlying_first = integrate_time_radius(
        [&](double t, double mu) { return hitting_density_slanted(t, mu, p); }, horizon, window, spec);
    out.survival = survival_prob(horizon, p, spec);
    return out;
}

double hitting_density_from_gradient(double t, double a, const WedgeDensityParams& p) {
    check_density_args(a, t);
    if (t < kMinHittingTime) return 0.0;
    const WedgeGeometry& w = p.wedge;
    auto cartesian = [&](double x, double y) {
        const double radius = std::hypot(x, y);
        return girsanov_weight(x, y, t, w) * survival_density_raw(radius, std::atan2(y, x), t, p) / radius;
    };
    // inward normal of the lower horizontal side is +y; the density vanishes on it
    auto central = [&](double h) { return (cartesian(a, h) - cartesian(a, -h)) / (2.0 * h); };
    const double h = 1e-2 * std::min(std::sqrt(t), a);
    const double derivative = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    return std::max(0.0, 0.5 * derivative);
}

std::uint64_t negative_density_clips() { return g_clips.load(std::memory_order_relaxed); }

}  // namespace paircredit
