#include "paircredit/mc_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "paircredit/errors.hpp"
#include "paircredit/parallel.hpp"

namespace paircredit {

namespace {

constexpr std::uint64_t kBatchSize = 4096;
// an interval is left unrefined when exp(-2 d0 d1 / (sigma^2 L)) < 1e-15
const double kSkipExponent = -std::log(1e-15);

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// SplitMix64 seeded from a 64-bit key.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t key) : state_(key) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return mix64(state_ += 0x9E3779B97F4A7C15ULL); }

private:
    std::uint64_t state_;
};

std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) {
    return mix64(parent ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

// Random numbers of one path. Stream i of seed s is keyed by a hash of
// (s, i); child(k) opens an independent substream, so a quantity tied to a
// fixed node of the time grid draws the same numbers whatever else the path
// consumes.
class PathStream {
public:
    PathStream(std::uint64_t key, bool mirrored) : key_(key), engine_(key), mirrored_(mirrored) {}
    PathStream(std::uint64_t seed, std::uint64_t stream, bool mirrored)
        : PathStream(derive_key(seed, stream), mirrored) {}

    [[nodiscard]] PathStream child(std::uint64_t index) const { return {derive_key(key_, index), mirrored_}; }
    double normal() {
        const double z = normal_(engine_);
        return mirrored_ ? -z : z;
    }
    double uniform() {
        const double u = uniform_(engine_);
        return mirrored_ ? 1.0 - u : u;
    }

private:
    std::uint64_t key_;
    SplitMix64 engine_;
    bool mirrored_;
    boost::random::normal_distribution<double> normal_;
    boost::random::uniform_01<double> uniform_;
};

// Both schemes run on 2^L steps, the first power of two at or above
// horizon * steps_per_year, so grids for different step counts are nested.
int dyadic_steps(double horizon, std::uint64_t steps_per_year) {
    const double wanted = std::ceil(horizon * static_cast<double>(steps_per_year) - 1e-9);
    int steps = 1;
    while (steps < wanted) {
        if (steps >= (1 << 30)) throw DomainError("monte carlo time grid too fine");
        steps *= 2;
    }
    return steps;
}

// Substream keys of the lazy scheme: nodes of the dyadic tree in heap order
// (root 1, children 2h and 2h + 1); the endpoint Y(T) uses key 0. Bridge
// uniforms of a fine step come from the node key with this tag set (the step
// index in the sequential scheme), so switching the correction off leaves
// the Gaussian path untouched.
constexpr std::uint64_t kLeafTag = std::uint64_t{1} << 62;

struct Crossing {
    int firm = -1;  // index of the first firm to default, -1 if none
    double tau = 0.0;
    std::array<double, 2> y{};  // log-distances at tau
};

// Log-distances to the barriers, Y_d(t) = y0_d + nu_d t + sigma_d W_d with
// corr(W_1, W_2) = rho; default of firm d when Y_d reaches 0.
template <int D>
class PathEngine {
public:
    using Vec = std::array<double, D>;

    PathEngine(const Vec& y0, const Vec& nu, const Vec& sigma, double rho, double horizon, const McConfig& cfg)
        : y0_(y0), nu_(nu), sigma_(sigma), rho_(rho), rho_c_(std::sqrt(1.0 - rho * rho)),
          steps_(dyadic_steps(horizon, cfg.steps_per_year)),
          dt_(horizon / steps_), horizon_(horizon), bridge_(cfg.bridge_correction), scheme_(cfg.scheme) {}

    Crossing run(PathStream& rng) const {
        Crossing out;
        for (int d = 0; d < D; ++d) {
            if (y0_[d] <= 0.0) {
                out.firm = d;
                out.y = pad(y0_);
                return out;
            }
        }
        if (scheme_ == PathScheme::sequential) {
            Vec a = y0_;
            for (int k = 0; k < steps_; ++k) {
                const Vec b = advance(a, dt_, rng);
                PathStream step = rng.child(kLeafTag | static_cast<std::uint64_t>(k));
                if (fine_step(k, a, b, step, out)) return out;
                a = b;
            }
        } else {
            PathStream endpoint = rng.child(0);
            const Vec end = advance(y0_, horizon_, endpoint);
            if (search(0, steps_, 1, y0_, end, rng, out)) return out;
        }
        out.tau = horizon_;
        return out;
    }

private:
    static std::array<double, 2> pad(const Vec& v) {
        std::array<double, 2> out{};
        for (int d = 0; d < D; ++d) out[d] = v[d];
        return out;
    }

    // correlated Gaussian increment with variance `var` per unit sigma^2
    Vec noise(double var, PathStream& rng) const {
        const double s = std::sqrt(var);
        Vec out;
        const double g1 = rng.normal();
        out[0] = sigma_[0] * s * g1;
        if constexpr (D == 2) {
            const double g2 = rng.normal();
            out[1] = sigma_[1] * s * (rho_ * g1 + rho_c_ * g2);
        }
        return out;
    }

    Vec advance(const Vec& a, double h, PathStream& rng) const {
        Vec out = noise(h, rng);
        for (int d = 0; d < D; ++d) out[d] += a[d] + nu_[d] * h;
        return out;
    }

    bool search(int i0, int i1, std::uint64_t node, const Vec& a, const Vec& b, const PathStream& rng,
                Crossing& out) const {
        if (i1 - i0 == 1) {
            PathStream leaf = rng.child(kLeafTag | node);
            return fine_step(i0, a, b, leaf, out);
        }
        const double length = (i1 - i0) * dt_;
        bool possible = false;
        for (int d = 0; d < D && !possible; ++d) {
            possible = b[d] <= 0.0 || 2.0 * a[d] * b[d] / (sigma_[d] * sigma_[d] * length) < kSkipExponent;
        }
        if (!possible) return false;
        const int m = i0 + (i1 - i0) / 2;
        PathStream here = rng.child(node);
        Vec mid = noise(0.25 * length, here);
        for (int d = 0; d < D; ++d) mid[d] += 0.5 * (a[d] + b[d]);
        return search(i0, m, 2 * node, a, mid, rng, out) || search(m, i1, 2 * node + 1, mid, b, rng, out);
    }

    // Step k from a (alive) to b. Discrete check, then the per-firm bridge
    // crossing probability. The crossing time is the linear-interpolation
    // point when b is past the barrier and the step midpoint otherwise.
    bool fine_step(int k, const Vec& a, const Vec& b, PathStream& rng, Crossing& out) const {
        double best = 2.0;
        int who = -1;
        for (int d = 0; d < D; ++d) {
            double frac = 2.0;
            if (b[d] <= 0.0) {
                frac = a[d] / (a[d] - b[d]);
            } else if (bridge_) {
                const double p = std::exp(-2.0 * a[d] * b[d] / (sigma_[d] * sigma_[d] * dt_));
                if (rng.uniform() < p) frac = 0.5;
            }
            if (frac < best) {  // ties go to the lower index (the underlying)
                best = frac;
                who = d;
            }
        }
        if (who < 0) return false;
        out.firm = who;
        out.tau = (k + best) * dt_;
        for (int d = 0; d < D; ++d) out.y[d] = d == who ? 0.0 : a[d] + best * (b[d] - a[d]);
        return true;
    }

    Vec y0_, nu_, sigma_;
    double rho_, rho_c_;
    int steps_;
    double dt_, horizon_;
    bool bridge_;
    PathScheme scheme_;
};

// Streaming mean and co-moments of K payoffs (Welford updates, Chan merges).
template <std::size_t K>
struct Moments {
    using Vec = std::array<double, K>;
    double n = 0.0;
    Vec mean{};
    std::array<double, K * K> comoment{};

    void add(const Vec& x) {
        n += 1.0;
        Vec delta;
        for (std::size_t i = 0; i < K; ++i) {
            delta[i] = x[i] - mean[i];
            mean[i] += delta[i] / n;
        }
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j) comoment[i * K + j] += delta[i] * (x[j] - mean[j]);
    }

    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        if (n == 0.0) {
            *this = o;
            return;
        }
        const double total = n + o.n;
        Vec delta;
        for (std::size_t i = 0; i < K; ++i) delta[i] = o.mean[i] - mean[i];
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j)
                comoment[i * K + j] += o.comoment[i * K + j] + delta[i] * delta[j] * n * o.n / total;
        for (std::size_t i = 0; i < K; ++i) mean[i] += delta[i] * o.n / total;
        n = total;
    }

    [[nodiscard]] double covariance(std::size_t i, std::size_t j) const {
        return n > 1.0 ? comoment[i * K + j] / (n - 1.0) : 0.0;
    }

    [[nodiscard]] McEstimate estimate(std::size_t i) const {
        return {mean[i], std::sqrt(std::max(0.0, covariance(i, i)) / std::max(n, 1.0)),
                static_cast<std::uint64_t>(n)};
    }
};

std::uint64_t sample_count(const McConfig& cfg) { return cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths; }

// Runs `sample(i, mirrored)` over all samples in fixed-size batches and merges
// batch moments in batch order, so the result does not depend on threads.
template <std::size_t K, class Sample>
Moments<K> accumulate(const McConfig& cfg, const Sample& sample) {
    const std::uint64_t n = sample_count(cfg);
    const std::uint64_t batches = (n + kBatchSize - 1) / kBatchSize;
    std::vector<Moments<K>> parts(batches);
    parallel::for_each_index(batches, parallel::resolve_threads(cfg.threads), [&](std::size_t b) {
        const std::uint64_t end = std::min<std::uint64_t>(n, (b + 1) * kBatchSize);
        for (std::uint64_t i = b * kBatchSize; i < end; ++i) {
            std::array<double, K> x = sample(i, false);
            if (cfg.antithetic) {
                const std::array<double, K> y = sample(i, true);
                for (std::size_t j = 0; j < K; ++j) x[j] = 0.5 * (x[j] + y[j]);
            }
            parts[b].add(x);
        }
    });
    Moments<K> total;
    for (const auto& part : parts) total.merge(part);
    return total;
}

PathEngine<2> pair_engine(const FirmParams& underlying, const FirmParams& counterparty, const MarketParams& market,
                          double horizon, const McConfig& cfg) {
    validate(underlying, "underlying");
    validate(counterparty, "counterparty");
    validate(market);
    cfg.validate();
    detail::require(horizon > 0.0, "simulation horizon must be positive");
    return PathEngine<2>({underlying.log_distance(), counterparty.log_distance()},
                         {drift_nu(underlying, market), drift_nu(counterparty, market)},
                         {underlying.sigma, counterparty.sigma}, market.correlation, horizon, cfg);
}

PathRecord to_record(const Crossing& c, const FirmParams& underlying, const FirmParams& counterparty,
                     const MarketParams& market) {
    PathRecord rec;
    rec.tau = c.tau;
    const double rho_c = std::sqrt(1.0 - market.correlation * market.correlation);
    if (c.firm == 0) {
        rec.first = FirstDefault::underlying;
        rec.survivor_coord = c.y[1] / (counterparty.sigma * rho_c);
    } else if (c.firm == 1) {
        rec.first = FirstDefault::counterparty;
        rec.survivor_coord = c.y[0] / (underlying.sigma * rho_c);
    }
    return rec;
}

}  // namespace

void McConfig::validate() const {
    if (n_paths < 1000) throw DomainError("McConfig: n_paths must be at least 1000");
    if (steps_per_year < 250) throw DomainError("McConfig: steps_per_year must be at least 250");
}

std::vector<PathRecord> simulate_first_passage(const FirmParams& underlying, const FirmParams& counterparty,
                                               const MarketParams& market, double horizon, const McConfig& cfg) {
    const PathEngine<2> engine = pair_engine(underlying, counterparty, market, horizon, cfg);
    const std::uint64_t n = sample_count(cfg);
    const int copies = cfg.antithetic ? 2 : 1;
    std::vector<PathRecord> out(n * copies);
    const std::uint64_t batches = (n + kBatchSize - 1) / kBatchSize;
    parallel::for_each_index(batches, parallel::resolve_threads(cfg.threads), [&](std::size_t b) {
        const std::uint64_t end = std::min<std::uint64_t>(n, (b + 1) * kBatchSize);
        for (std::uint64_t i = b * kBatchSize; i < end; ++i) {
            for (int c = 0; c < copies; ++c) {
                PathStream rng(cfg.seed, i, c == 1);
                out[i * copies + c] = to_record(engine.run(rng), underlying, counterparty, market);
            }
        }
    });
    return out;
}

McLegs mc_legs(const McScenario& sc, const McConfig& cfg) {
    validate(sc.cds);
    validate(sc.ftd);
    const double r = sc.market.rate;
    if (!(r > 0.0)) throw DomainError("fee leg requires a positive short rate");
    const double horizon = std::max(sc.cds.maturity, sc.ftd.maturity);
    const PathEngine<2> engine = pair_engine(sc.underlying, sc.counterparty, sc.market, horizon, cfg);
    const SingleNameCoeffs coeffs = make_single_name_coeffs(sc.underlying, sc.market);
    const CdsContract& cds = sc.cds;
    const double ds_loss = cds.notional * (1.0 - cds.recovery_underlying);
    const double ftd_loss = sc.ftd.notional * (1.0 - sc.ftd.recovery);

    // payoffs: D_c, D_s, F, D_ftd, FtD annuity per unit spread
    auto sample = [&](std::uint64_t i, bool mirrored) {
        PathStream rng(cfg.seed, i, mirrored);
        const Crossing c = engine.run(rng);
        std::array<double, 5> x{};
        const double tau_cds = c.firm >= 0 ? std::min(c.tau, cds.maturity) : cds.maturity;
        if (c.firm >= 0 && c.tau < cds.maturity) {
            if (c.firm == 0) {
                x[1] = ds_loss * std::exp(-r * c.tau);
            } else if (cds.recovery_counterparty < 1.0) {
                x[0] = (1.0 - cds.recovery_counterparty) *
                       cds_value_at_default(c.y[0] / sc.underlying.sigma, c.tau, cds, coeffs, sc.market, sc.fees);
            }
        }
        x[2] = cds.spread * cds.notional * -std::expm1(-r * tau_cds) / r;
        const bool ftd_hit = c.firm >= 0 && c.tau <= sc.ftd.maturity;
        if (ftd_hit) x[3] = ftd_loss * std::exp(-r * c.tau);
        const double tau_ftd = ftd_hit ? c.tau : sc.ftd.maturity;
        x[4] = sc.ftd.notional * -std::expm1(-r * tau_ftd) / r;
        return x;
    };
    const Moments<5> m = accumulate<5>(cfg, sample);

    McLegs out;
    out.counterparty_default = m.estimate(0);
    out.standard_default = m.estimate(1);
    out.fee = m.estimate(2);
    out.ftd_default = m.estimate(3);
    // fair value D_s + D_c - F as the linear combination (1, 1, -1)
    const std::array<double, 3> coef{1.0, 1.0, -1.0};
    double var = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) var += coef[i] * coef[j] * m.covariance(i, j);
    out.fair_value = {m.mean[1] + m.mean[0] - m.mean[2], std::sqrt(std::max(0.0, var) / m.n),
                      static_cast<std::uint64_t>(m.n)};
    // ratio D / A with the delta method
    const double d = m.mean[3], a = m.mean[4];
    if (a > 0.0) {
        const double ratio = d / a;
        const double rvar = (m.covariance(3, 3) - 2.0 * ratio * m.covariance(3, 4) +
                             ratio * ratio * m.covariance(4, 4)) /
                            (a * a);
        out.ftd_spread = {ratio, std::sqrt(std::max(0.0, rvar) / m.n), static_cast<std::uint64_t>(m.n)};
    }
    return out;
}

McEstimate mc_leg(LegKind kind, const McScenario& scenario, const McConfig& cfg) {
    const McLegs legs = mc_legs(scenario, cfg);
    switch (kind) {
        case LegKind::counterparty_default:
            return legs.counterparty_default;
        case LegKind::standard_default:
            return legs.standard_default;
        case LegKind::fee:
            return legs.fee;
        case LegKind::ftd_default:
            return legs.ftd_default;
    }
    return {};
}

HittingHistogram mc_hitting_histogram(Boundary boundary, const FirmParams& underlying,
                                      const FirmParams& counterparty, const MarketParams& market, double horizon,
                                      const std::vector<double>& t_edges, const std::vector<double>& space_edges,
                                      const McConfig& cfg) {
    auto increasing = [](const std::vector<double>& e) {
        return e.size() >= 2 && std::is_sorted(e.begin(), e.end()) &&
               std::adjacent_find(e.begin(), e.end()) == e.end();
    };
    detail::require(increasing(t_edges) && increasing(space_edges), "histogram edges must be strictly increasing");
    const std::vector<PathRecord> paths = simulate_first_passage(underlying, counterparty, market, horizon, cfg);
    const FirstDefault wanted = boundary == Boundary::horizontal ? FirstDefault::counterparty : FirstDefault::underlying;

    HittingHistogram h;
    h.t_edges = t_edges;
    h.space_edges = space_edges;
    const std::size_t nt = t_edges.size() - 1, ns = space_edges.size() - 1;
    h.counts.assign(nt * ns, 0);
    h.n_paths = paths.size();
    auto bin = [](const std::vector<double>& e, double v) -> std::ptrdiff_t {
        if (v < e.front() || v >= e.back()) return -1;
        return std::upper_bound(e.begin(), e.end(), v) - e.begin() - 1;
    };
    for (const PathRecord& p : paths) {
        switch (p.first) {
            case FirstDefault::none:
                ++h.survivors;
                continue;
            case FirstDefault::counterparty:
                ++h.horizontal_hits;
                break;
            case FirstDefault::underlying:
                ++h.slanted_hits;
                break;
        }
        if (p.first != wanted) continue;
        const auto i = bin(t_edges, p.tau), j = bin(space_edges, p.survivor_coord);
        if (i >= 0 && j >= 0) ++h.counts[h.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j))];
    }
    h.density.resize(h.counts.size());
    h.std_error.resize(h.counts.size());
    const double n = static_cast<double>(h.n_paths);
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < ns; ++j) {
            const std::size_t k = h.index(i, j);
            const double area = (t_edges[i + 1] - t_edges[i]) * (space_edges[j + 1] - space_edges[j]);
            const double p = static_cast<double>(h.counts[k]) / n;
            h.density[k] = p / area;
            h.std_error[k] = std::sqrt(p * (1.0 - p) / n) / area;
        }
    }
    return h;
}

SingleNameMc mc_single_name(const FirmParams& firm, const MarketParams& market, double mu, double horizon,
                            const McConfig& cfg) {
    validate(firm, "underlying");
    validate(market);
    cfg.validate();
    detail::require(horizon > 0.0, "simulation horizon must be positive");
    detail::require(mu >= 0.0, "scaled distance must be non-negative");
    const PathEngine<1> engine({firm.sigma * mu}, {drift_nu(firm, market)}, {firm.sigma}, 0.0, horizon, cfg);
    const double r = market.rate;
    auto sample = [&](std::uint64_t i, bool mirrored) {
        PathStream rng(cfg.seed, i, mirrored);
        const Crossing c = engine.run(rng);
        std::array<double, 2> x{};
        if (c.firm == 0 && c.tau <= horizon) {
            x[0] = 1.0;
            x[1] = std::exp(-r * c.tau);
        }
        return x;
    };
    const Moments<2> m = accumulate<2>(cfg, sample);
    return {m.estimate(0), m.estimate(1)};
}

}  // namespace paircredit
