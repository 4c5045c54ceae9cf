#pragma once

#include <cstdint>
#include <vector>

#include "paircredit/model.hpp"
#include "paircredit/singlename.hpp"

namespace paircredit {

/// How a path's discrete skeleton is generated.
enum class PathScheme {
    /// Brownian-bridge refinement on demand: intervals whose continuous
    /// crossing probability is below 1e-15 for both firms are never refined
    /// down to single steps. Same law as `sequential` up to that tolerance.
    lazy_bridge,
    /// Plain step-by-step simulation on the full grid.
    sequential,
};

struct McConfig {
    std::uint64_t n_paths = 1'000'000;
    int steps_per_year = 2000;
    std::uint64_t seed = 20240601;
    bool bridge_correction = true;
    /// Pair each path with its mirror (negated normals, 1 - u uniforms); a
    /// pair counts as one sample. Off by default to keep errors honest.
    bool antithetic = false;
    PathScheme scheme = PathScheme::lazy_bridge;
    int threads = 0;  ///< 0: PAIRCREDIT_THREADS or hardware parallelism

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_effective = 0;  ///< number of independent samples
};

enum class FirstDefault : std::uint8_t { none, underlying, counterparty };

struct PathRecord {
    FirstDefault first = FirstDefault::none;
    double tau = 0.0;             ///< first default time, or the horizon
    double survivor_coord = 0.0;  ///< wedge coordinate of the survivor at tau (a or mu); 0 if none
};

/// One record per simulated path (both members of an antithetic pair).
[[nodiscard]] std::vector<PathRecord> simulate_first_passage(const FirmParams& underlying,
                                                             const FirmParams& counterparty,
                                                             const MarketParams& market, double horizon,
                                                             const McConfig& cfg);

struct McScenario {
    FirmParams underlying;
    FirmParams counterparty;
    MarketParams market;
    CdsContract cds;
    FtdContract ftd;
    FeeConvention fees = FeeConvention::exact;
};

enum class LegKind { counterparty_default, standard_default, fee, ftd_default };

/// Every leg estimated on one common set of paths.
struct McLegs {
    McEstimate counterparty_default;
    McEstimate standard_default;
    McEstimate fee;
    McEstimate ftd_default;
    McEstimate fair_value;  ///< D_s + D_c - F per path
    McEstimate ftd_spread;  ///< ratio estimator with a delta-method error
};

[[nodiscard]] McLegs mc_legs(const McScenario& scenario, const McConfig& cfg);
[[nodiscard]] McEstimate mc_leg(LegKind kind, const McScenario& scenario, const McConfig& cfg);

enum class Boundary { horizontal, slanted };

/// Empirical first-hit density on one side of the wedge, row-major in
/// (time bin, space bin).
struct HittingHistogram {
    std::vector<double> t_edges;
    std::vector<double> space_edges;
    std::vector<std::uint64_t> counts;
    std::vector<double> density;    ///< count / (n_paths * bin area)
    std::vector<double> std_error;  ///< binomial error of `density`
    std::uint64_t n_paths = 0;
    std::uint64_t horizontal_hits = 0;  ///< over the whole horizon, binned or not
    std::uint64_t slanted_hits = 0;
    std::uint64_t survivors = 0;

    [[nodiscard]] std::size_t index(std::size_t t_bin, std::size_t space_bin) const {
        return t_bin * (space_edges.size() - 1) + space_bin;
    }
};

[[nodiscard]] HittingHistogram mc_hitting_histogram(Boundary boundary, const FirmParams& underlying,
                                                    const FirmParams& counterparty, const MarketParams& market,
                                                    double horizon, const std::vector<double>& t_edges,
                                                    const std::vector<double>& space_edges, const McConfig& cfg);

struct SingleNameMc {
    McEstimate default_prob;       ///< P(tau1 <= horizon)
    McEstimate discounted_factor;  ///< E[exp(-r tau1) 1{tau1 < horizon}]
};

/// One-firm barrier simulation started from scaled distance mu = ln(V1/v1) / sigma1.
[[nodiscard]] SingleNameMc mc_single_name(const FirmParams& firm, const MarketParams& market, double mu,
                                          double horizon, const McConfig& cfg);

}  // namespace paircredit
