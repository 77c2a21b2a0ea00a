#include "rsc/closed_form.hpp"

#include <cmath>
#include <limits>

#include "rsc/errors.hpp"

namespace rsc {

namespace {

constexpr double kSingularDenominator = 1e-12;

// Accumulates a sum of printed terms; the first zero denominator marks the
// whole value singular.
class Term {
 public:
  explicit Term(std::string name) : value_{std::move(name), 0.0, {}} {}

  Term& add(double v) {
    value_.value += v;
    return *this;
  }
  Term& add(double num, double den, const char* den_expr) {
    if (std::abs(den) < kSingularDenominator) {
      if (value_.singular.empty()) value_.singular = value_.name + ": " + den_expr;
      return *this;
    }
    value_.value += num / den;
    return *this;
  }
  ClosedFormValue done() {
    if (!value_.singular.empty()) value_.value = std::numeric_limits<double>::quiet_NaN();
    return value_;
  }

 private:
  ClosedFormValue value_;
};

double sq(double x) { return x * x; }

ClosedFormSet centralized(ModelId model, const ModelParams& p) {
  const double mu = p.mu, bH = p.beta_H, bL = p.beta_L;
  const double X = p.p_m + p.c_m - p.c_r - p.c - p.c_d;
  const double D = bL - mu * bH;
  const double qa = p.a - p.p1;
  const double pi0 = p.pi_R0;
  const double fem = model == ModelId::II ? p.f * p.e_m : 0.0;

  ClosedFormSet s;
  s.model = model;

  Term tH("tau_H");
  tH.add(mu * qa * X - fem, 4.0 * bH, "4*beta_H");
  Term tL("tau_L");
  tL.add((1.0 - mu) * qa * X - fem, 4.0 * D, "4*(beta_L - mu*beta_H)");

  Term wH("w_H");
  wH.add((mu * X - fem) / 4.0);
  if (model == ModelId::I) {
    wH.add(sq(1.0 - mu) * X, 4.0 * D, "4*(beta_L - mu*beta_H)");
  } else {
    wH.add(sq(1.0 - mu) * X + (D - fem), 4.0 * D, "4*(beta_L - mu*beta_H)");
  }
  wH.add(4.0 * pi0 * bH, sq(qa) * X, "(a - p1)^2*(p_m + c_m - c_r - c - c_d)");
  wH.add(p.c + p.c_d);

  Term wL("w_L");
  wL.add((1.0 - mu) * X - fem, 4.0 * D, "4*(beta_L - mu*beta_H)");
  wL.add(sq(1.0 - mu) * X / 4.0);
  wL.add(4.0 * pi0 * bH * D, (1.0 - mu) * sq(qa) * X,
         "(1 - mu)*(a - p1)^2*(p_m + c_m - c_r - c - c_d)");
  wL.add(p.c + p.c_d);

  s.values = {wH.done(), wL.done(), tH.done(), tL.done(),
              ClosedFormValue{"p1", p.p1, {}}};
  s.notes.push_back("p1 is the evaluation point; the centralized formulas do not solve it");
  return s;
}

ClosedFormSet decentralized(ModelId model, const ModelParams& p) {
  const double a = p.a, e = p.eps, c = p.c, pm = p.p_m, mu = p.mu;
  const double bH = p.beta_H, bL = p.beta_L, pi0 = p.pi_R0;
  const bool emission = model != ModelId::III;
  const double fem = emission ? p.f * p.e_m : 0.0;
  const double fe0 = emission ? p.f * p.e_0 : 0.0;
  const double k = model == ModelId::V ? p.k : 0.0;

  const double S = pm + p.c_m + p.c_r + p.c_d - c;
  const double S2 = pm + p.c_m + p.c_r - c;
  const double Y = p.c_m + p.c_r + p.c_d - c;
  const double G = 2 * a - 2 * c + a * e + c * e * e;

  // Shared bracket of the w_H numerators.
  const double wH_bracket = 2 * a + 2 * c - 2 * pm + a * e - c * e * pm - c * e * e * pm +
                            e * e * pm - a * c * e - 2 * a * c;
  // Shared bracket of the w_L numerators.
  const double wL_bracket = 2 * a * bL - c * e * pm + e * bL * pm - c * e * e * pm +
                            e * e * bL * pm - a * c * e + a * e * bL - 2 * a * c;
  const double w_den = 2 * bH * (4 * bL - c * c - bL * bL + bL * mu) -
                       2 * bL * (c * c * mu - mu * bH * bH);
  const char* w_den_expr =
      "2*beta_H*(4*beta_L - c^2 - beta_L^2 + beta_L*mu) - 2*beta_L*mu*(c^2 - beta_H^2)";

  ClosedFormSet s;
  s.model = model;

  Term wH("w_H");
  Term wL("w_L");
  if (model == ModelId::III) {
    wH.add(bL * wH_bracket, w_den, w_den_expr);
    // The printed Model III w_L denominator has beta_L where the others have
    // 4*beta_L.
    const double wL3_den = 2 * bH * (bL - c * c - bL * bL + bL * mu) -
                           2 * bL * (c * c * mu - mu * bH * bH);
    wL.add(bH * wL_bracket + 2 * bL * (c * pm - bL * pm), wL3_den,
           "2*beta_H*(beta_L - c^2 - beta_L^2 + beta_L*mu) - 2*beta_L*(c^2*mu - mu*beta_H^2)");
  } else {
    wH.add(bL * (wH_bracket + fem) - fe0, w_den, w_den_expr);
    wL.add(bH * wL_bracket + bL * (2 * c * pm - 2 * bL * pm + fem) - fe0, w_den, w_den_expr);
  }
  if (model == ModelId::V) {
    wH.add(k * (2 + e * e - mu * mu), 2 * bH * (4 * bL - c * c - bL * bL) - 2 * c * c * bL * mu,
           "2*beta_H*(4*beta_L - c^2 - beta_L^2) - 2*c^2*beta_L*mu");
    wL.add(k * (2 - e * e - 2 * mu * mu), 2 * bH * (4 * bL - c * c - bL * bL + bL * mu),
           "2*beta_H*(4*beta_L - c^2 - beta_L^2 + beta_L*mu)");
  }

  Term tH("tau_H");
  tH.add(pi0 * mu * (a - e) * G + bH * fem, mu * bH * sq(e - 2 * mu),
         "mu*beta_H*(eps - 2*mu)^2");
  Term tL("tau_L");
  tL.add(pi0 * (1 - mu) * G + (bH - bL) * fem, mu * (bH - bL) * (e * e - 4 * mu),
         "mu*(beta_H - beta_L)*(eps^2 - 4*mu)");
  if (model == ModelId::V) {
    tH.add((8 - e * e) * k, sq(e - 2 * mu), "(eps - 2*mu)^2");
    tL.add((4 - e * e) * k - e, e * e - 4 * mu, "eps^2 - 4*mu");
  }

  Term p1("p1");
  Term p2("p2");
  if (model == ModelId::III) {
    const double den = 4 * bH - S * S + 4 * bL - e * e;
    const char* den_expr = "4*beta_H - S^2 + 4*beta_L - eps^2";
    p1.add(mu * (2 + e) * (2 * bH - S * S) + (1 - mu) * (4 + e) * (2 * bL - S * S), den,
           den_expr);
    p2.add(mu * (6 + e) * (4 * bH * bH - 2 * S2 * S2) +
               (1 - mu) * (8 + 2 * e) * (4 * bL * bL - 2 * S2 * S2),
           den, den_expr);
  } else {
    const double den = 4 * bH - (a - e) * S * S + 4 * bL - e * e;
    const char* den_expr = "4*beta_H - (a - eps)*S^2 + 4*beta_L - eps^2";
    p1.add(mu * (2 + e) * (a - e) * (2 * bH + S * S) +
               (a + e) * (1 - mu) * (4 + e) * (2 * bL - S * S),
           den, den_expr);
    p1.add(fem, 4 * bH + (a - e) * S * S, "4*beta_H + (a - eps)*S^2");
    p2.add(mu * (a - e) * (6 + e) * (4 * bH * bH - 2 * S2 * S2) +
               (a + e) * (1 - mu) * (8 + 2 * e) * (4 * bL * bL - 2 * S2 * S2),
           den, den_expr);
    p2.add(fem, (a - e) * S * S, "(a - eps)*S^2");
    if (model == ModelId::IV) {
      p1.add(fe0);
      p2.add(fe0, bH * (a - e), "beta_H*(a - eps)");
    } else {
      p1.add(2 * fe0 - Y * k, S * S, "S^2");
      p2.add(3 * fe0 - Y * (k - e), S * S, "S^2");
    }
  }

  s.values = {wH.done(), wL.done(), tH.done(), tL.done(), p1.done(), p2.done()};
  s.notes.push_back("S = p_m + c_m + c_r + c_d - c");
  if (model != ModelId::III)
    s.notes.push_back(
        "price correction terms use the printed bracketing; their denominators are "
        "ambiguous in print");
  return s;
}

}  // namespace

const ClosedFormValue& ClosedFormSet::get(std::string_view name) const {
  for (const auto& v : values)
    if (v.name == name) return v;
  throw std::out_of_range("closed form has no variable " + std::string(name));
}

bool ClosedFormSet::all_ok() const { return first_singular().empty(); }

std::string ClosedFormSet::first_singular() const {
  for (const auto& v : values)
    if (!v.ok()) return v.singular;
  return {};
}

ClosedFormSet closed_form_values(ModelId model, const ModelParams& p) {
  return is_competitive(model) ? decentralized(model, p) : centralized(model, p);
}

Solution closed_form(ModelId model, const ModelParams& p) {
  const ClosedFormSet set = closed_form_values(model, p);
  if (auto bad = set.first_singular(); !bad.empty()) throw SingularError(bad);

  ContractMenu menu{set.get("w_H").value, set.get("w_L").value, set.get("tau_H").value,
                    set.get("tau_L").value};
  PricePair prices{set.get("p1").value, std::nullopt};
  if (is_competitive(model)) prices.p2 = set.get("p2").value;

  Solution s = evaluate_solution(model, p, menu, prices, Provenance::closed_form);
  s.notes = set.notes;
  return s;
}

}  // namespace rsc
