#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "paircredit/mc_oracle.hpp"
#include "paircredit/model.hpp"
#include "paircredit/pricing.hpp"

namespace paircredit::cli {

/// Invalid scenario file; carries the offending line (1-based, 0 if unknown)
/// and the dotted field name.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string file, int line, std::string field, const std::string& message);
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

struct Scenario {
    FirmParams underlying;
    FirmParams counterparty;
    MarketParams market;
    std::optional<CdsContract> cds;
    std::optional<FtdContract> ftd;
    PricingSpec pricing;
    McConfig monte_carlo;
};

/// Parses and validates a YAML scenario; throws ScenarioError.
[[nodiscard]] Scenario load_scenario(const std::string& path);
[[nodiscard]] Scenario parse_scenario(const std::string& text, const std::string& file_label);

}  // namespace paircredit::cli
