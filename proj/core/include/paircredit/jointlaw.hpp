#pragma once

#include <cstdint>

#include "paircredit/model.hpp"
#include "paircredit/quadrature.hpp"
#include "paircredit/specfun.hpp"

namespace paircredit {

/// Which time enters the drift-removal exponent -|phi|^2 s / 2.
enum class GirsanovExponent {
    hitting_time,        ///< s = the hitting time t (correct at a stopping time)
    horizon_on_slanted,  ///< s = the contract horizon on the slanted side; diagnostic negative control only
};

struct WedgeDensityParams {
    WedgeGeometry wedge;
    SeriesTolerances tol;
    GirsanovExponent exponent = GirsanovExponent::hitting_time;
    double horizon = 0.0;  ///< read only by GirsanovExponent::horizon_on_slanted
};

/// Below this time (years) both hitting densities are returned as 0.
inline constexpr double kMinHittingTime = 1e-8;

/// Radon-Nikodym weight exp(phi . (z - z0) - |phi|^2 t / 2) at endpoint z = (x, y).
[[nodiscard]] double girsanov_weight(double x, double y, double t, const WedgeGeometry& wedge);

/// Density of the driftless process killed at the wedge boundary, in polar
/// coordinates (per unit radius per unit angle), at radius mu_r and angle theta.
[[nodiscard]] double survival_density_q(double mu_r, double theta, double t, const WedgeDensityParams& p);

/// Drift-weighted survival density: girsanov_weight * survival_density_q.
[[nodiscard]] double survival_density(double mu_r, double theta, double t, const WedgeDensityParams& p);

/// P(tau2 in dt, tau2 < tau1, Z1(tau2) in da) / (dt da): the counterparty
/// defaults first, at time t, with the underlying at wedge coordinate a.
[[nodiscard]] double hitting_density_horizontal(double t, double a, const WedgeDensityParams& p);

/// P(tau1 in dt, tau1 < tau2, |Z(tau1)| in dmu) / (dt dmu): the underlying
/// defaults first, at time t, at radius mu_r along the slanted side.
[[nodiscard]] double hitting_density_slanted(double t, double mu_r, const WedgeDensityParams& p);

/// P(tau1 ^ tau2 > horizon) by integrating the survival density over the wedge.
[[nodiscard]] QuadResult survival_prob(double horizon, const WedgeDensityParams& p, const QuadSpec& spec);

struct PartitionCheck {
    QuadResult counterparty_first;  ///< int of hitting_density_horizontal over (0, T] x (0, inf)
    QuadResult underlying_first;    ///< int of hitting_density_slanted over (0, T] x (0, inf)
    QuadResult survival;
    [[nodiscard]] double sum() const {
        return counterparty_first.value + underlying_first.value + survival.value;
    }
};

[[nodiscard]] PartitionCheck normalization_check(double horizon, const WedgeDensityParams& p, const QuadSpec& spec);

/// Hitting density on the horizontal side recovered as one half of the normal
/// derivative of the drift-weighted survival density (Richardson-extrapolated
/// central difference). Independent of the hitting-density series.
[[nodiscard]] double hitting_density_from_gradient(double t, double a, const WedgeDensityParams& p);

/// Radial integration window matched to a wedge: centred on r0, drifting with |phi|.
[[nodiscard]] RadialWindow radial_window(const WedgeGeometry& wedge);

/// Number of density evaluations clipped from below -1e-12 to 0 (diagnostic).
[[nodiscard]] std::uint64_t negative_density_clips();

}  // namespace paircredit
