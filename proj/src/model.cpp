#include "rsc/model.hpp"

#include <cmath>

#include "rsc/errors.hpp"

namespace rsc {

std::string_view to_string(ModelId m) {
  switch (m) {
    case ModelId::I: return "I";
    case ModelId::II: return "II";
    case ModelId::III: return "III";
    case ModelId::IV: return "IV";
    case ModelId::V: return "V";
  }
  return "?";
}

std::optional<ModelId> parse_model_id(std::string_view s) {
  for (ModelId m : kAllModels)
    if (s == to_string(m)) return m;
  if (s.size() == 1 && s[0] >= '1' && s[0] <= '5')
    return static_cast<ModelId>(s[0] - '0');
  return std::nullopt;
}

std::string_view to_string(RetailerType t) { return t == RetailerType::H ? "H" : "L"; }

std::string_view to_string(TransferOnDeviation t) {
  return t == TransferOnDeviation::chosen_item ? "chosen_item" : "own_type";
}

std::optional<TransferOnDeviation> parse_transfer_on_deviation(std::string_view s) {
  if (s == "chosen_item") return TransferOnDeviation::chosen_item;
  if (s == "own_type") return TransferOnDeviation::own_type;
  return std::nullopt;
}

std::vector<std::string> validate(const ModelParams& p) {
  std::vector<std::string> bad;
  auto finite = [&](const char* name, double v) {
    if (!std::isfinite(v)) bad.push_back(std::string(name) + ": must be finite");
  };
  finite("a", p.a);
  finite("eps", p.eps);
  finite("c", p.c);
  finite("c_d", p.c_d);
  finite("c_r", p.c_r);
  finite("c_m", p.c_m);
  finite("p_m", p.p_m);
  finite("mu", p.mu);
  finite("beta_H", p.beta_H);
  finite("beta_L", p.beta_L);
  finite("pi_R0", p.pi_R0);
  finite("f", p.f);
  finite("k", p.k);
  finite("e_m", p.e_m);
  finite("e_0", p.e_0);
  finite("tau_0", p.tau_0);
  finite("p1", p.p1);
  if (p.p2) finite("p2", *p.p2);

  if (!(p.eps > 0.0 && p.eps < 1.0)) bad.push_back("eps: must satisfy 0 < eps < 1");
  if (!(p.mu >= 0.0 && p.mu <= 1.0)) bad.push_back("mu: must lie in [0, 1]");
  if (!(p.tau_0 >= 0.0 && p.tau_0 <= 1.0)) bad.push_back("tau_0: must lie in [0, 1]");
  if (!(p.beta_L > 0.0)) bad.push_back("beta_L: must be > 0");
  if (!(p.beta_H > p.beta_L)) bad.push_back("beta_H: must be > beta_L");
  if (!(p.a > 0.0)) bad.push_back("a: must be > 0");
  auto nonneg = [&](const char* name, double v) {
    if (!(v >= 0.0)) bad.push_back(std::string(name) + ": must be >= 0");
  };
  nonneg("c", p.c);
  nonneg("c_d", p.c_d);
  nonneg("c_r", p.c_r);
  nonneg("c_m", p.c_m);
  nonneg("p_m", p.p_m);
  nonneg("f", p.f);
  nonneg("k", p.k);
  nonneg("e_m", p.e_m);
  nonneg("e_0", p.e_0);
  return bad;
}

std::array<TypeProfile, 2> type_profiles(const ModelParams& p) {
  const double wH = p.mu_weights_l_branch ? 1.0 - p.mu : p.mu;
  return {TypeProfile{RetailerType::H, p.beta_H, wH},
          TypeProfile{RetailerType::L, p.beta_L, 1.0 - wH}};
}

double type_weight(const ModelParams& p, RetailerType t) {
  const double wH = p.mu_weights_l_branch ? 1.0 - p.mu : p.mu;
  return t == RetailerType::H ? wH : 1.0 - wH;
}

double type_beta(const ModelParams& p, RetailerType t) {
  return t == RetailerType::H ? p.beta_H : p.beta_L;
}

void check_prices(const PricePair& prices, ModelId model) {
  if (is_competitive(model) && !prices.p2)
    throw StructuralError("model " + std::string(to_string(model)) +
                          " requires retailer 2 price p2");
  if (!is_competitive(model) && prices.p2)
    throw StructuralError("model " + std::string(to_string(model)) +
                          " has no retailer 2; p2 must be absent");
}

Demand demand(const ModelParams& p, const PricePair& prices, ModelId model) {
  check_prices(prices, model);
  Demand d;
  if (is_competitive(model)) {
    const double p2 = *prices.p2;
    d.q1 = p.a - prices.p1 + p.eps * p2;
    d.q2 = p.a - p2 + p.eps * prices.p1;
    d.Q = d.q1 + d.q2;
  } else {
    d.q1 = p.a - prices.p1;
    d.q2 = 0.0;
    d.Q = d.q1;
  }
  d.negative = d.q1 < 0.0 || d.q2 < 0.0;
  return d;
}

double retailer1_demand(const ModelParams& p, const PricePair& prices, ModelId model) {
  check_prices(prices, model);
  return is_competitive(model) ? p.a - prices.p1 + p.eps * *prices.p2
                               : p.a - prices.p1;
}

double manufacturer_quantity(const ModelParams& p, const PricePair& prices,
                             ModelId model) {
  return demand(p, prices, model).Q;
}

double emission_transfer(const ModelParams& p, double quantity) {
  return -p.f * (quantity * p.e_m - p.e_0);
}

double recycling_transfer(const ModelParams& p, double tau) {
  return p.k * (tau - p.tau_0);
}

double retailer2_penalty(const ModelParams& p) { return -p.k * p.tau_0; }

double manufacturer_unit_margin(const ModelParams& p, const ContractItem& item) {
  return p.p_m - item.tau * (item.w + p.c_d + p.c_r) - (1.0 - item.tau) * p.c_m;
}

double manufacturer_profit(ModelId model, const ModelParams& p,
                           const ContractMenu& menu, const PricePair& prices) {
  const double qty = manufacturer_quantity(p, prices, model);
  double total = 0.0;
  for (const auto& t : type_profiles(p))
    total += t.weight * qty * manufacturer_unit_margin(p, menu.item(t.label));
  if (has_emission_transfer(model)) total += emission_transfer(p, qty);
  return total;
}

double retailer1_profit(ModelId model, const ModelParams& p,
                        const ContractMenu& menu, const PricePair& prices) {
  const double q1 = retailer1_demand(p, prices, model);
  double total = 0.0;
  for (const auto& t : type_profiles(p)) {
    const ContractItem it = menu.item(t.label);
    double branch = q1 * it.tau * (it.w - p.c) + q1 * (prices.p1 - p.p_m) -
                    t.beta * it.tau * it.tau;
    if (has_recycling_transfer(model)) branch += recycling_transfer(p, it.tau);
    total += t.weight * branch;
  }
  return total;
}

double retailer2_profit(ModelId model, const ModelParams& p, const PricePair& prices) {
  if (!is_competitive(model))
    throw StructuralError("model " + std::string(to_string(model)) +
                          " has no retailer 2");
  check_prices(prices, model);
  const double p2 = *prices.p2;
  double v = (p2 - p.p_m) * (p.a - p2 + p.eps * prices.p1);
  if (has_recycling_transfer(model)) v += retailer2_penalty(p);
  return v;
}

double chain_profit(ModelId model, const ModelParams& p, const ContractMenu& menu,
                    const PricePair& prices) {
  double v = manufacturer_profit(model, p, menu, prices) +
             retailer1_profit(model, p, menu, prices);
  if (is_competitive(model)) v += retailer2_profit(model, p, prices);
  return v;
}

std::vector<std::string> diagnose(ModelId model, const ModelParams& p,
                                  const ContractMenu& menu, const PricePair& prices) {
  std::vector<std::string> out;
  const Demand d = demand(p, prices, model);
  if (d.q1 < 0.0) out.push_back("negative_demand_q1");
  if (d.q2 < 0.0) out.push_back("negative_demand_q2");
  auto tau_range = [&](const char* code, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) out.push_back(code);
  };
  tau_range("tau_H_out_of_range", menu.tau_H);
  tau_range("tau_L_out_of_range", menu.tau_L);
  if (manufacturer_unit_margin(p, menu.item(RetailerType::H)) < 0.0)
    out.push_back("negative_manufacturer_margin_H");
  if (manufacturer_unit_margin(p, menu.item(RetailerType::L)) < 0.0)
    out.push_back("negative_manufacturer_margin_L");
  for (double v : {menu.w_H, menu.w_L, menu.tau_H, menu.tau_L, prices.p1})
    if (!std::isfinite(v)) {
      out.push_back("non_finite_value");
      break;
    }
  return out;
}

}  // namespace rsc
