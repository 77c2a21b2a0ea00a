#include "rsc/solution.hpp"

namespace rsc {

std::string_view to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed_form" : "oracle";
}

Solution evaluate_solution(ModelId model, const ModelParams& p, const ContractMenu& menu,
                           const PricePair& prices, Provenance provenance, double tol) {
  Solution s;
  s.model = model;
  s.menu = menu;
  s.prices = prices;
  s.provenance = provenance;
  s.demand = demand(p, prices, model);
  s.profits.manufacturer = manufacturer_profit(model, p, menu, prices);
  s.profits.retailer1 = retailer1_profit(model, p, menu, prices);
  s.profits.retailer2 = is_competitive(model) ? retailer2_profit(model, p, prices) : 0.0;
  s.profits.chain = chain_profit(model, p, menu, prices);
  if (has_emission_transfer(model))
    s.transfers.emission = emission_transfer(p, s.demand.Q);
  if (has_recycling_transfer(model)) {
    s.transfers.recycling_H = recycling_transfer(p, menu.tau_H);
    s.transfers.recycling_L = recycling_transfer(p, menu.tau_L);
    s.transfers.retailer2_penalty = retailer2_penalty(p);
  }
  s.screening = screening_check(menu, p, prices, model, tol);
  s.warnings = diagnose(model, p, menu, prices);
  if (!s.screening.feasible) s.warnings.push_back("screening_infeasible");
  return s;
}

}  // namespace rsc
