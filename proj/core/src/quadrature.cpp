#include "paircredit/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "paircredit/errors.hpp"
#include "paircredit/parallel.hpp"

namespace paircredit {

namespace {

// 15-point Kronrod abscissae on [-1, 1]; the 7-point Gauss rule uses the odd indices.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kNodes = 15;
constexpr std::size_t kBatchCap = 16;

struct Rule {
    std::array<double, kNodes> x{};
    std::array<double, kNodes> wk{};
    std::array<double, kNodes> wg{};  // zero off the Gauss nodes
};

constexpr Rule make_rule() {
    Rule r;
    for (int i = 0; i < 7; ++i) {
        r.x[i] = -kXgk[i];
        r.x[14 - i] = kXgk[i];
        r.wk[i] = r.wk[14 - i] = kWgk[i];
        if (i % 2 == 1) r.wg[i] = r.wg[14 - i] = kWg[i / 2];
    }
    r.x[7] = 0.0;
    r.wk[7] = kWgk[7];
    r.wg[7] = kWg[3];
    return r;
}

constexpr Rule kRule = make_rule();

struct Panel {
    Rectangle box{};
    double value = 0.0;
    double err_x = 0.0;
    double err_y = 0.0;
    [[nodiscard]] double error() const { return err_x + err_y; }
};

Panel evaluate(const Integrand2D& f, const Rectangle& box) {
    const double cx = 0.5 * (box.x0 + box.x1), hx = 0.5 * (box.x1 - box.x0);
    const double cy = 0.5 * (box.y0 + box.y1), hy = 0.5 * (box.y1 - box.y0);
    std::array<double, kNodes> row_k{};  // Kronrod in y for each x node
    std::array<double, kNodes> row_g{};  // Gauss in y for each x node
    for (int i = 0; i < kNodes; ++i) {
        const double x = cx + hx * kRule.x[i];
        double sk = 0.0, sg = 0.0;
        for (int j = 0; j < kNodes; ++j) {
            const double v = f(x, cy + hy * kRule.x[j]);
            if (!std::isfinite(v)) throw QuadratureFailure("integrand returned a non-finite value");
            sk += kRule.wk[j] * v;
            sg += kRule.wg[j] * v;
        }
        row_k[i] = sk;
        row_g[i] = sg;
    }
    double kk = 0.0, gx = 0.0, ky = 0.0;
    for (int i = 0; i < kNodes; ++i) {
        kk += kRule.wk[i] * row_k[i];
        gx += kRule.wg[i] * row_k[i];
        ky += kRule.wk[i] * row_g[i];
    }
    const double area = hx * hy;
    return {box, kk * area, std::abs(kk - gx) * area, std::abs(kk - ky) * area};
}

// Neumaier summation, so totals do not depend on how panels were split.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + comp; }
};

}  // namespace

void QuadSpec::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("quadrature rel_tol must be positive");
    if (!(abs_tol >= 0.0)) throw DomainError("quadrature abs_tol must be non-negative");
    if (!(mu_cutoff_sigmas >= 8.0)) throw DomainError("quadrature mu_cutoff_sigmas must be at least 8");
    if (max_subdivisions < 1) throw DomainError("quadrature max_subdivisions must be positive");
}

QuadResult integrate_rectangle(const Integrand2D& f, Rectangle box, const QuadSpec& spec) {
    spec.validate();
    const int threads = parallel::resolve_threads(spec.threads);
    std::vector<Panel> panels{evaluate(f, box)};
    long evaluations = kNodes * kNodes;

    std::vector<std::size_t> order;
    while (true) {
        CompensatedSum total, error;
        for (const auto& p : panels) {
            total.add(p.value);
            error.add(p.error());
        }
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total.value()));
        if (error.value() <= tol) {
            return {total.value(), error.value(), static_cast<int>(panels.size()), evaluations};
        }
        if (static_cast<int>(panels.size()) >= spec.max_subdivisions) {
            throw QuadratureFailure("quadrature did not reach its tolerance within max_subdivisions panels");
        }

        // Refine the worst panels carrying half of the error budget; the batch
        // is fixed by the panel state alone, never by the thread count.
        order.resize(panels.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return panels[a].error() > panels[b].error(); });
        std::vector<std::size_t> chosen;
        double covered = 0.0;
        for (std::size_t idx : order) {
            chosen.push_back(idx);
            covered += panels[idx].error();
            if (covered >= 0.5 * error.value() || chosen.size() >= kBatchCap) break;
        }

        std::vector<Rectangle> boxes;
        boxes.reserve(2 * chosen.size());
        for (std::size_t idx : chosen) {
            const Rectangle& b = panels[idx].box;
            if (panels[idx].err_x >= panels[idx].err_y) {
                const double mid = 0.5 * (b.x0 + b.x1);
                boxes.push_back({b.x0, mid, b.y0, b.y1});
                boxes.push_back({mid, b.x1, b.y0, b.y1});
            } else {
                const double mid = 0.5 * (b.y0 + b.y1);
                boxes.push_back({b.x0, b.x1, b.y0, mid});
                boxes.push_back({b.x0, b.x1, mid, b.y1});
            }
        }
        std::vector<Panel> fresh(boxes.size());
        parallel::for_each_index(boxes.size(), threads, [&](std::size_t i) { fresh[i] = evaluate(f, boxes[i]); });
        evaluations += static_cast<long>(boxes.size()) * kNodes * kNodes;

        for (std::size_t k = 0; k < chosen.size(); ++k) {
            panels[chosen[k]] = fresh[2 * k];
            panels.push_back(fresh[2 * k + 1]);
        }
    }
}

QuadResult integrate_time_radius(const Integrand2D& f, double horizon, RadialWindow window, const QuadSpec& spec) {
    detail::require(horizon > 0.0, "integration horizon must be positive");
    const double cutoff = spec.mu_cutoff_sigmas;
    const double sqrt_h = std::sqrt(horizon);
    // (u, v) in [0,1]^2 -> t = horizon u^2, mu = v * extent(t)
    auto mapped = [&](double u, double v) {
        const double t = horizon * u * u;
        if (t <= 0.0) return 0.0;
        const double extent = window.center + std::abs(window.drift) * t + cutoff * sqrt_h * u;
        const double mu = v * extent;
        if (mu <= 0.0) return 0.0;
        return f(t, mu) * 2.0 * horizon * u * extent;
    };
    return integrate_rectangle(mapped, {0.0, 1.0, 0.0, 1.0}, spec);
}

QuadResult integrate_wedge(const Integrand2D& f, double angle, RadialWindow window, double at_time,
                           const QuadSpec& spec) {
    detail::require(angle > 0.0, "wedge angle must be positive");
    detail::require(at_time > 0.0, "wedge integration time must be positive");
    const double reach = std::abs(window.drift) * at_time + spec.mu_cutoff_sigmas * std::sqrt(at_time);
    Rectangle box{std::max(0.0, window.center - reach), window.center + reach, 0.0, angle};
    if (window.center_angle >= 0.0 && reach < window.center) {
        const double half = std::asin(reach / window.center);
        box.y0 = std::max(0.0, window.center_angle - half);
        box.y1 = std::min(angle, window.center_angle + half);
    }
    auto shielded = [&](double mu, double kappa) { return mu > 0.0 ? f(mu, kappa) : 0.0; };
    return integrate_rectangle(shielded, box, spec);
}

}  // namespace paircredit
