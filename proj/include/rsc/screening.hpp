#pragma once

// Participation (IR) and incentive-compatibility (IC) constraints of the
// two-type screening menu.

#include <array>
#include <string>
#include <string_view>

#include "rsc/model.hpp"

namespace rsc {

inline constexpr double kDefaultFeasibilityTol = 1e-6;

enum class ScreeningConstraint { ir_L, ir_H, ic_H, ic_L };

inline constexpr std::array<ScreeningConstraint, 4> kAllScreeningConstraints = {
    ScreeningConstraint::ir_L, ScreeningConstraint::ir_H, ScreeningConstraint::ic_H,
    ScreeningConstraint::ic_L};

std::string_view to_string(ScreeningConstraint c);

/// Slacks in currency units; a constraint holds iff its slack >= -tol.
struct ScreeningReport {
  double ir_L = 0.0;
  double ir_H = 0.0;
  double ic_H = 0.0;
  double ic_L = 0.0;
  double tol = kDefaultFeasibilityTol;
  std::array<bool, 4> binding{};  // indexed like kAllScreeningConstraints
  bool feasible = true;

  double slack(ScreeningConstraint c) const;
  double min_slack() const;
  ScreeningConstraint most_violated() const;
  std::string binding_set() const;  // e.g. "ir_L|ic_H", or "none"
};

/// Payoff of a retailer-1 of `type` that takes `as_if_item`. The fixed cost
/// uses the retailer's own beta; in Model V the recycling transfer uses the tau
/// selected by params.transfer_on_deviation.
double type_payoff(RetailerType type, RetailerType as_if_item, const ContractMenu& menu,
                   const ModelParams& p, const PricePair& prices, ModelId model);

ScreeningReport screening_check(const ContractMenu& menu, const ModelParams& p,
                                const PricePair& prices, ModelId model,
                                double tol = kDefaultFeasibilityTol);

}  // namespace rsc
