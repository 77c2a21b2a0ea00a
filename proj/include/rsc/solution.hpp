#pragma once

#include <string>
#include <vector>

#include "rsc/model.hpp"
#include "rsc/screening.hpp"

namespace rsc {

enum class Provenance { closed_form, oracle };
std::string_view to_string(Provenance p);

struct Profits {
  double manufacturer = 0.0;
  double retailer1 = 0.0;
  double retailer2 = 0.0;  // zero for Models I-II
  double chain = 0.0;
};

struct Transfers {
  double emission = 0.0;            // M, manufacturer
  double recycling_H = 0.0;         // k (tau_H - tau_0), retailer 1 if type H
  double recycling_L = 0.0;         // k (tau_L - tau_0), retailer 1 if type L
  double retailer2_penalty = 0.0;   // -k tau_0
};

/// First-order optimality residual of one optimized stage, measured with
/// central finite differences.
struct StageResidual {
  std::string stage;          // "leader", "retailer1", "retailer2", "chain"
  double gradient_norm = 0.0; // raw objective gradient norm
  double kkt_residual = 0.0;  // after active-constraint multipliers
  double scaled = 0.0;        // kkt_residual / max(1, |objective|)
  std::string active;         // active constraints and bounds
};

struct Solution {
  ModelId model = ModelId::I;
  ContractMenu menu;
  PricePair prices;
  Demand demand;
  Profits profits;
  Transfers transfers;
  ScreeningReport screening;
  std::vector<std::string> warnings;
  Provenance provenance = Provenance::closed_form;
  std::vector<StageResidual> residuals;
  std::vector<std::string> notes;
};

/// Fills every derived field of a Solution from its decisions.
Solution evaluate_solution(ModelId model, const ModelParams& p, const ContractMenu& menu,
                           const PricePair& prices, Provenance provenance,
                           double tol = kDefaultFeasibilityTol);

}  // namespace rsc
