#pragma once

// Domain types and pure profit evaluators for the five reverse-supply-chain
// game models.
//
//   I   centralized
//   II  centralized, emission reward-penalty on the manufacturer
//   III decentralized, two competing retailers
//   IV  decentralized + emission reward-penalty
//   V   decentralized + emission and recycling reward-penalty
//
// Retailer 1 collects used product at rate tau and is privately one of two
// types (H: recycling-difficulty beta_H, L: beta_L). The manufacturer offers
// the screening menu {(w_H, tau_H), (w_L, tau_L)}. Every evaluator here is a
// pure function of its arguments.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rsc {

enum class ModelId { I = 1, II, III, IV, V };

inline constexpr std::array<ModelId, 5> kAllModels = {
    ModelId::I, ModelId::II, ModelId::III, ModelId::IV, ModelId::V};

std::string_view to_string(ModelId m);
std::optional<ModelId> parse_model_id(std::string_view s);

/// Two retailers with substitutable demand (III, IV, V).
constexpr bool is_competitive(ModelId m) { return m >= ModelId::III; }
/// Manufacturer faces the emission transfer M = -f(Q e_m - e_0).
constexpr bool has_emission_transfer(ModelId m) {
  return m == ModelId::II || m == ModelId::IV || m == ModelId::V;
}
/// Retailers face the recycling transfers k(tau - tau_0) and -k tau_0.
constexpr bool has_recycling_transfer(ModelId m) { return m == ModelId::V; }

enum class RetailerType { H, L };

constexpr RetailerType other(RetailerType t) {
  return t == RetailerType::H ? RetailerType::L : RetailerType::H;
}
std::string_view to_string(RetailerType t);

/// Which tau enters the Model V recycling transfer when a type evaluates a
/// menu item other than its own.
enum class TransferOnDeviation { chosen_item, own_type };

std::string_view to_string(TransferOnDeviation t);
std::optional<TransferOnDeviation> parse_transfer_on_deviation(std::string_view s);

/// Exogenous scalars. Defaults are the numerical-study values; mu is not given
/// there and defaults to 0.5, pi_R0 defaults to 0.
struct ModelParams {
  double a = 3.0;       // potential market demand
  double eps = 0.4;     // substitution coefficient, 0 < eps < 1
  double c = 4.0;       // retailer 1 unit collection cost
  double c_d = 3.0;     // manufacturer testing/sorting cost
  double c_r = 2.6;     // manufacturer remanufacturing cost
  double c_m = 2.0;     // manufacturer cost of new production
  double p_m = 1.3;     // wholesale price to the retailers
  double mu = 0.5;      // probability weight on the H branch
  double beta_H = 0.7;  // recycling difficulty, H type
  double beta_L = 0.5;  // recycling difficulty, L type
  double pi_R0 = 0.0;   // retailer 1 reservation profit
  double f = 3.0;       // emission reward-penalty strength
  double k = 2.0;       // recycling reward-penalty strength
  double e_m = 0.9;     // unit emission
  double e_0 = 1.3;     // emission cap
  double tau_0 = 0.8;   // target recycling rate

  // Evaluation point. The study lists p1, p2 among its parameters even though
  // they are decisions; they are used as the p1 of the Model I/II closed forms
  // and as the starting point of the price iteration.
  double p1 = 1.7;
  std::optional<double> p2 = 1.9;

  // Informational only: the study's fixed costs, inconsistent with
  // I = beta tau^2 at the given beta.
  double I_H = 40.0;
  double I_L = 30.0;

  // Weight mu on the L branch instead of the H branch.
  bool mu_weights_l_branch = false;
  TransferOnDeviation transfer_on_deviation = TransferOnDeviation::chosen_item;
};

/// Every violated invariant, as "field: rule" strings. Empty when valid.
std::vector<std::string> validate(const ModelParams& p);

struct TypeProfile {
  RetailerType label;
  double beta;
  double weight;
};

/// {H, L} profiles; weights sum to one.
std::array<TypeProfile, 2> type_profiles(const ModelParams& p);
double type_weight(const ModelParams& p, RetailerType t);
double type_beta(const ModelParams& p, RetailerType t);

struct ContractItem {
  double w;
  double tau;
};

struct ContractMenu {
  double w_H = 0.0;
  double w_L = 0.0;
  double tau_H = 0.0;
  double tau_L = 0.0;

  ContractItem item(RetailerType t) const {
    return t == RetailerType::H ? ContractItem{w_H, tau_H}
                                : ContractItem{w_L, tau_L};
  }
  bool operator==(const ContractMenu&) const = default;
};

struct PricePair {
  double p1 = 0.0;
  std::optional<double> p2;
  bool operator==(const PricePair&) const = default;
};

struct Demand {
  double q1 = 0.0;
  double q2 = 0.0;
  double Q = 0.0;
  bool negative = false;  // some component below zero; never clamped
};

/// Throws StructuralError unless prices carry p2 exactly for Models III-V.
void check_prices(const PricePair& prices, ModelId model);

Demand demand(const ModelParams& p, const PricePair& prices, ModelId model);

/// Retailer 1 demand for the given model, without the full Demand record.
double retailer1_demand(const ModelParams& p, const PricePair& prices, ModelId model);

/// Quantity the manufacturer's margin applies to: a - p1 in I/II, Q in III-V.
double manufacturer_quantity(const ModelParams& p, const PricePair& prices, ModelId model);

/// M = -f (quantity e_m - e_0). Positive below the cap.
double emission_transfer(const ModelParams& p, double quantity);

/// k (tau - tau_0), received by retailer 1.
double recycling_transfer(const ModelParams& p, double tau);

/// -k tau_0, received by retailer 2.
double retailer2_penalty(const ModelParams& p);

/// Per-unit manufacturer margin for one menu item.
double manufacturer_unit_margin(const ModelParams& p, const ContractItem& item);

double manufacturer_profit(ModelId model, const ModelParams& p,
                           const ContractMenu& menu, const PricePair& prices);
double retailer1_profit(ModelId model, const ModelParams& p,
                        const ContractMenu& menu, const PricePair& prices);
/// Throws StructuralError for Models I-II.
double retailer2_profit(ModelId model, const ModelParams& p, const PricePair& prices);
double chain_profit(ModelId model, const ModelParams& p, const ContractMenu& menu,
                    const PricePair& prices);

/// Diagnostic codes for out-of-range values at a decision point: negative
/// demand, tau outside [0,1], negative manufacturer unit margin per type.
std::vector<std::string> diagnose(ModelId model, const ModelParams& p,
                                  const ContractMenu& menu, const PricePair& prices);

}  // namespace rsc
