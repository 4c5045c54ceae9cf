#pragma once

#include <string>
#include <utility>
#include <vector>

#include "paircredit/jointlaw.hpp"
#include "paircredit/model.hpp"
#include "paircredit/quadrature.hpp"
#include "paircredit/singlename.hpp"
#include "paircredit/specfun.hpp"

namespace paircredit {

struct PricingSpec {
    QuadSpec quad;
    SeriesTolerances series;
    FeeConvention fees = FeeConvention::exact;
    GirsanovExponent exponent = GirsanovExponent::hitting_time;

    void validate() const;
};

struct LegValue {
    double value = 0.0;
    double error_estimate = 0.0;
    std::vector<std::pair<std::string, double>> breakdown;
};

/// Two firms, the market and the wedge derived from them. The wedge is kept
/// as a separate field so tests can price against a deliberately altered one.
struct PairModel {
    FirmParams underlying;
    FirmParams counterparty;
    MarketParams market;
    WedgeGeometry wedge;
};

[[nodiscard]] PairModel make_pair_model(const FirmParams& underlying, const FirmParams& counterparty,
                                        const MarketParams& market);

// Default legs and fees, all scaled by the notional and discounted to 0.

[[nodiscard]] LegValue counterparty_default_leg(const PairModel& pair, const CdsContract& contract,
                                                const PricingSpec& spec);
[[nodiscard]] LegValue standard_default_leg(const PairModel& pair, const CdsContract& contract,
                                            const PricingSpec& spec);
/// Fees accrue until the first of the two defaults or maturity. Requires r > 0.
[[nodiscard]] LegValue fee_leg(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec);

/// Fee leg per unit spread (risky annuity times notional) for fees that stop
/// at the first default or at `maturity`. Requires r > 0.
[[nodiscard]] LegValue fee_leg_per_unit_spread(const PairModel& pair, double maturity, double notional,
                                               const PricingSpec& spec);

/// D_s + D_c - F, from the protection buyer's side.
[[nodiscard]] double cds_fair_value(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec);

struct ParSpread {
    double spread = 0.0;
    double residual = 0.0;  ///< cds_fair_value at `spread`
    int iterations = 0;
};

/// Spread zeroing cds_fair_value, by bisection on [0, s_hi] with s_hi doubled
/// up to 1. contract.spread is ignored. Throws NoRoot without a sign change.
[[nodiscard]] ParSpread cds_par_spread(const PairModel& pair, const CdsContract& contract, const PricingSpec& spec);

/// Pays C (1 - R) at the first default if it occurs before maturity.
[[nodiscard]] LegValue ftd_default_leg(const PairModel& pair, const FtdContract& contract, const PricingSpec& spec);

/// Default leg divided by the fee leg per unit spread.
[[nodiscard]] double ftd_fair_spread(const PairModel& pair, const FtdContract& contract, const PricingSpec& spec);

// Convenience overloads deriving the wedge from the firms.

[[nodiscard]] LegValue counterparty_default_leg(const FirmParams& underlying, const FirmParams& counterparty,
                                                const MarketParams& market, const CdsContract& contract,
                                                const PricingSpec& spec);
[[nodiscard]] LegValue standard_default_leg(const FirmParams& underlying, const FirmParams& counterparty,
                                            const MarketParams& market, const CdsContract& contract,
                                            const PricingSpec& spec);
[[nodiscard]] LegValue fee_leg(const FirmParams& underlying, const FirmParams& counterparty,
                               const MarketParams& market, const CdsContract& contract, const PricingSpec& spec);
[[nodiscard]] double cds_fair_value(const FirmParams& underlying, const FirmParams& counterparty,
                                    const MarketParams& market, const CdsContract& contract,
                                    const PricingSpec& spec);
[[nodiscard]] ParSpread cds_par_spread(const FirmParams& underlying, const FirmParams& counterparty,
                                       const MarketParams& market, const CdsContract& contract,
                                       const PricingSpec& spec);
[[nodiscard]] LegValue ftd_default_leg(const FirmParams& underlying, const FirmParams& counterparty,
                                       const MarketParams& market, const FtdContract& contract,
                                       const PricingSpec& spec);
[[nodiscard]] double ftd_fair_spread(const FirmParams& underlying, const FirmParams& counterparty,
                                     const MarketParams& market, const FtdContract& contract,
                                     const PricingSpec& spec);

}  // namespace paircredit
