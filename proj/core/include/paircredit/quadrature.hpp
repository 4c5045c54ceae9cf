#pragma once

#include <functional>

namespace paircredit {

/// Error control for the two-dimensional integrators.
struct QuadSpec {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;          ///< in units of the integral
    double mu_cutoff_sigmas = 12.0;  ///< radial truncation, in units of sqrt(time)
    int max_subdivisions = 4000;     ///< cap on the number of panels
    int threads = 0;                 ///< 0: PAIRCREDIT_THREADS or hardware parallelism

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
    long evaluations = 0;
};

struct Rectangle {
    double x0, x1, y0, y1;
};

using Integrand2D = std::function<double(double, double)>;

/// Adaptive product Gauss-Kronrod (7/15) cubature on a rectangle. Each panel
/// carries one embedded error estimate per dimension and is bisected along
/// the worse one. Results do not depend on the number of threads.
[[nodiscard]] QuadResult integrate_rectangle(const Integrand2D& f, Rectangle box, const QuadSpec& spec);

/// Truncation window around the starting point, at polar coordinates
/// (center, center_angle), of a process drifting at speed `drift`. Radii run
/// over (0, center + drift * t + cutoff * sqrt(t)].
struct RadialWindow {
    double center = 0.0;
    double drift = 0.0;
    double center_angle = -1.0;  ///< negative: unknown, no angular truncation
};

/// int_0^horizon int_0^inf f(t, mu) dmu dt. The time axis is mapped as
/// t = horizon * u^2, which clusters nodes near t = 0.
[[nodiscard]] QuadResult integrate_time_radius(const Integrand2D& f, double horizon, RadialWindow window,
                                               const QuadSpec& spec);

/// int_0^inf int_0^angle f(mu, kappa) dkappa dmu for a density at time
/// `at_time`: the box is cut down to the points within drift * at_time +
/// cutoff * sqrt(at_time) of the starting point.
[[nodiscard]] QuadResult integrate_wedge(const Integrand2D& f, double angle, RadialWindow window, double at_time,
                                         const QuadSpec& spec);

}  // namespace paircredit
