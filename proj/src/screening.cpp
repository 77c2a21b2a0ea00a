#include "rsc/screening.hpp"

#include <algorithm>
#include <cmath>

namespace rsc {

std::string_view to_string(ScreeningConstraint c) {
  switch (c) {
    case ScreeningConstraint::ir_L: return "ir_L";
    case ScreeningConstraint::ir_H: return "ir_H";
    case ScreeningConstraint::ic_H: return "ic_H";
    case ScreeningConstraint::ic_L: return "ic_L";
  }
  return "?";
}

double ScreeningReport::slack(ScreeningConstraint c) const {
  switch (c) {
    case ScreeningConstraint::ir_L: return ir_L;
    case ScreeningConstraint::ir_H: return ir_H;
    case ScreeningConstraint::ic_H: return ic_H;
    case ScreeningConstraint::ic_L: return ic_L;
  }
  return 0.0;
}

double ScreeningReport::min_slack() const { return std::min({ir_L, ir_H, ic_H, ic_L}); }

ScreeningConstraint ScreeningReport::most_violated() const {
  ScreeningConstraint worst = ScreeningConstraint::ir_L;
  for (auto c : kAllScreeningConstraints)
    if (slack(c) < slack(worst)) worst = c;
  return worst;
}

std::string ScreeningReport::binding_set() const {
  std::string out;
  for (std::size_t i = 0; i < kAllScreeningConstraints.size(); ++i) {
    if (!binding[i]) continue;
    if (!out.empty()) out += '|';
    out += to_string(kAllScreeningConstraints[i]);
  }
  return out.empty() ? "none" : out;
}

double type_payoff(RetailerType type, RetailerType as_if_item, const ContractMenu& menu,
                   const ModelParams& p, const PricePair& prices, ModelId model) {
  const double q1 = retailer1_demand(p, prices, model);
  const ContractItem it = menu.item(as_if_item);
  double v = q1 * it.tau * (it.w - p.c) + q1 * (prices.p1 - p.p_m) -
             type_beta(p, type) * it.tau * it.tau;
  if (has_recycling_transfer(model)) {
    const double tau_r = p.transfer_on_deviation == TransferOnDeviation::chosen_item
                             ? it.tau
                             : menu.item(type).tau;
    v += recycling_transfer(p, tau_r);
  }
  return v;
}

ScreeningReport screening_check(const ContractMenu& menu, const ModelParams& p,
                                const PricePair& prices, ModelId model, double tol) {
  using T = RetailerType;
  const double hh = type_payoff(T::H, T::H, menu, p, prices, model);
  const double hl = type_payoff(T::H, T::L, menu, p, prices, model);
  const double ll = type_payoff(T::L, T::L, menu, p, prices, model);
  const double lh = type_payoff(T::L, T::H, menu, p, prices, model);

  ScreeningReport r;
  r.tol = tol;
  r.ir_L = ll - p.pi_R0;
  r.ir_H = hh - p.pi_R0;
  r.ic_H = hh - hl;
  r.ic_L = ll - lh;
  r.feasible = true;
  for (std::size_t i = 0; i < kAllScreeningConstraints.size(); ++i) {
    const double s = r.slack(kAllScreeningConstraints[i]);
    r.binding[i] = std::abs(s) <= tol;
    if (!(s >= -tol)) r.feasible = false;
  }
  return r;
}

}  // namespace rsc
