#include "paircredit/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "paircredit/errors.hpp"

namespace paircredit::cli {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().is_null() ? 0 : node.Mark().line + 1; }

// A mapping node plus its dotted path, for diagnostics.
class Block {
public:
    Block(YAML::Node node, std::string path, const std::string& file) : node_(std::move(node)), path_(std::move(path)), file_(file) {
        if (!node_.IsMap()) fail("expected a mapping");
    }

    [[noreturn]] void fail(const std::string& message) const { throw ScenarioError(file_, line_of(node_), path_, message); }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        const YAML::Node child = node_[key];
        throw ScenarioError(file_, child ? line_of(child) : line_of(node_), field(key), message);
    }

    void allow_only(const std::set<std::string>& keys) const {
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!keys.contains(key)) throw ScenarioError(file_, line_of(kv.first), field(key), "unknown key");
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

    [[nodiscard]] Block child(const std::string& key) const {
        if (!has(key)) fail("missing block '" + key + "'");
        return {node_[key], field(key), file_};
    }

    template <class T>
    [[nodiscard]] T get(const std::string& key) const {
        if (!has(key)) fail("missing required key '" + key + "'");
        return convert<T>(key);
    }

    template <class T>
    [[nodiscard]] T get(const std::string& key, T fallback) const {
        return has(key) ? convert<T>(key) : fallback;
    }

    // Runs a library validator and re-reports its DomainError at `key`.
    void check(const std::string& key, const std::function<void()>& validator) const {
        try {
            validator();
        } catch (const DomainError& e) {
            if (key.empty()) fail(e.what());
            fail(key, e.what());
        }
    }

    [[nodiscard]] const YAML::Node& node() const { return node_; }
    [[nodiscard]] std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    template <class T>
    T convert(const std::string& key) const {
        const YAML::Node value = node_[key];
        try {
            T out = value.as<T>();
            if constexpr (std::is_floating_point_v<T>) {
                if (!std::isfinite(out)) fail(key, "must be a finite number");
            }
            return out;
        } catch (const YAML::BadConversion&) {
            fail(key, "has the wrong type");
        }
    }

    YAML::Node node_;
    std::string path_;
    const std::string& file_;
};

FirmParams read_firm(const Block& b, const std::string& label) {
    b.allow_only({"v0", "barrier", "log_distance", "barrier_growth", "sigma", "payout"});
    FirmParams f;
    f.v0 = b.get<double>("v0");
    if (b.has("barrier") == b.has("log_distance")) b.fail("give exactly one of 'barrier' and 'log_distance'");
    f.barrier = b.has("barrier") ? b.get<double>("barrier") : f.v0 * std::exp(-b.get<double>("log_distance"));
    f.barrier_growth = b.get<double>("barrier_growth", 0.0);
    f.sigma = b.get<double>("sigma");
    f.payout = b.get<double>("payout", 0.0);
    if (!(f.v0 > 0.0)) b.fail("v0", label + ": must be positive");
    if (!(f.barrier > 0.0)) b.fail(b.has("barrier") ? "barrier" : "log_distance", label + ": barrier must be positive");
    if (!(f.sigma > 0.0)) b.fail("sigma", label + ": must be positive");
    if (!(f.v0 > f.barrier)) {
        b.fail(b.has("barrier") ? "barrier" : "log_distance",
               label + ": firm value v0 must exceed the barrier (the firm would start in default)");
    }
    b.check("", [&] { validate(f, label); });
    return f;
}

void read_quadrature(const Block& b, QuadSpec& q) {
    b.allow_only({"rel_tol", "abs_tol", "mu_cutoff_sigmas", "max_subdivisions"});
    q.rel_tol = b.get<double>("rel_tol", q.rel_tol);
    q.abs_tol = b.get<double>("abs_tol", q.abs_tol);
    q.mu_cutoff_sigmas = b.get<double>("mu_cutoff_sigmas", q.mu_cutoff_sigmas);
    q.max_subdivisions = b.get<int>("max_subdivisions", q.max_subdivisions);
    b.check("", [&] { q.validate(); });
}

void read_series(const Block& b, SeriesTolerances& s) {
    b.allow_only({"term_tol", "max_terms"});
    s.term_tol = b.get<double>("term_tol", s.term_tol);
    s.max_terms = b.get<int>("max_terms", s.max_terms);
    b.check("", [&] { s.validate(); });
}

void read_monte_carlo(const Block& b, McConfig& m) {
    b.allow_only({"n_paths", "steps_per_year", "seed", "bridge_correction", "antithetic", "scheme"});
    m.n_paths = b.get<std::uint64_t>("n_paths", m.n_paths);
    m.steps_per_year = b.get<int>("steps_per_year", m.steps_per_year);
    m.seed = b.get<std::uint64_t>("seed", m.seed);
    m.bridge_correction = b.get<bool>("bridge_correction", m.bridge_correction);
    m.antithetic = b.get<bool>("antithetic", m.antithetic);
    const auto scheme = b.get<std::string>("scheme", "lazy_bridge");
    if (scheme == "lazy_bridge") {
        m.scheme = PathScheme::lazy_bridge;
    } else if (scheme == "sequential") {
        m.scheme = PathScheme::sequential;
    } else {
        b.fail("scheme", "must be 'lazy_bridge' or 'sequential'");
    }
    b.check("", [&] { m.validate(); });
}

Scenario read(const YAML::Node& root, const std::string& file) {
    const Block top(root, "", file);
    top.allow_only({"firms", "market", "contract", "numerics"});
    Scenario s;

    const Block firms = top.child("firms");
    firms.allow_only({"underlying", "counterparty"});
    s.underlying = read_firm(firms.child("underlying"), "underlying");
    s.counterparty = read_firm(firms.child("counterparty"), "counterparty");

    const Block market = top.child("market");
    market.allow_only({"rate", "correlation"});
    s.market.rate = market.get<double>("rate");
    s.market.correlation = market.get<double>("correlation");
    market.check("correlation", [&] { validate(s.market); });

    const Block contract = top.child("contract");
    contract.allow_only({"cds", "ftd"});
    if (contract.has("cds") == contract.has("ftd")) contract.fail("give exactly one contract block: 'cds' or 'ftd'");
    if (contract.has("cds")) {
        const Block c = contract.child("cds");
        c.allow_only({"notional", "spread", "maturity", "recovery_underlying", "recovery_counterparty"});
        CdsContract cds;
        cds.notional = c.get<double>("notional", cds.notional);
        cds.spread = c.get<double>("spread");
        cds.maturity = c.get<double>("maturity");
        cds.recovery_underlying = c.get<double>("recovery_underlying", cds.recovery_underlying);
        cds.recovery_counterparty = c.get<double>("recovery_counterparty", cds.recovery_counterparty);
        c.check("", [&] { validate(cds); });
        s.cds = cds;
    } else {
        const Block c = contract.child("ftd");
        c.allow_only({"notional", "recovery", "maturity"});
        FtdContract ftd;
        ftd.notional = c.get<double>("notional", ftd.notional);
        ftd.recovery = c.get<double>("recovery", ftd.recovery);
        ftd.maturity = c.get<double>("maturity");
        c.check("", [&] { validate(ftd); });
        s.ftd = ftd;
    }

    if (top.has("numerics")) {
        const Block n = top.child("numerics");
        n.allow_only({"quadrature", "series", "monte_carlo", "fee_convention"});
        if (n.has("quadrature")) read_quadrature(n.child("quadrature"), s.pricing.quad);
        if (n.has("series")) read_series(n.child("series"), s.pricing.series);
        if (n.has("monte_carlo")) read_monte_carlo(n.child("monte_carlo"), s.monte_carlo);
        const auto fees = n.get<std::string>("fee_convention", "exact");
        if (fees == "exact") {
            s.pricing.fees = FeeConvention::exact;
        } else if (fees == "unconditional") {
            s.pricing.fees = FeeConvention::unconditional;
        } else {
            n.fail("fee_convention", "must be 'exact' or 'unconditional'");
        }
    }

    // the pair must map into the wedge
    top.check("", [&] { (void)derive_wedge(s.underlying, s.counterparty, s.market); });
    return s;
}

}  // namespace

ScenarioError::ScenarioError(std::string file, int line, std::string field, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + (field.empty() ? "" : field + ": ") + message),
      line_(line),
      field_(std::move(field)) {}

Scenario parse_scenario(const std::string& text, const std::string& file_label) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ScenarioError(file_label, e.mark.line + 1, "", e.msg);
    }
    if (!root) throw ScenarioError(file_label, 0, "", "empty scenario");
    return read(root, file_label);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path, 0, "", "cannot open scenario file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str(), path);
}

}  // namespace paircredit::cli
