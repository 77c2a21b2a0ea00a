#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rsc/closed_form.hpp"
#include "rsc/errors.hpp"

using namespace rsc;

TEST_CASE("Model I recycling rate at the study point") {
  const ModelParams p;
  const auto s = closed_form_values(ModelId::I, p);
  CHECK(s.get("tau_H").value == doctest::Approx(-1.4625).epsilon(1e-12));
  const Solution sol = closed_form(ModelId::I, p);
  CHECK(std::find(sol.warnings.begin(), sol.warnings.end(), "tau_H_out_of_range") !=
        sol.warnings.end());
  CHECK(sol.provenance == Provenance::closed_form);
}

TEST_CASE("Model II rates reduce to Model I at f = 0") {
  ModelParams p;
  p.f = 0.0;
  const auto one = closed_form_values(ModelId::I, p);
  const auto two = closed_form_values(ModelId::II, p);
  CHECK(two.get("tau_H").value == one.get("tau_H").value);
  CHECK(two.get("tau_L").value == one.get("tau_L").value);
  CHECK(two.get("w_L").value == one.get("w_L").value);
  // The printed w_H of Model II keeps (beta_L - mu beta_H) / (4 (beta_L - mu beta_H)).
  CHECK(two.get("w_H").value - one.get("w_H").value == doctest::Approx(0.25));
}

TEST_CASE("singular denominators are named") {
  ModelParams p;
  p.beta_L = p.mu * p.beta_H;
  const auto s = closed_form_values(ModelId::I, p);
  CHECK_FALSE(s.get("tau_L").ok());
  CHECK(std::isnan(s.get("tau_L").value));
  CHECK(s.get("tau_H").ok());
  CHECK_THROWS_AS(closed_form(ModelId::I, p), SingularError);
  try {
    closed_form(ModelId::I, p);
  } catch (const SingularError& e) {
    CHECK(e.expression().find("beta_L - mu*beta_H") != std::string::npos);
  }
}

TEST_CASE("every model yields six named values") {
  const ModelParams p;
  for (ModelId m : kAllModels) {
    const auto s = closed_form_values(m, p);
    CHECK(s.values.size() == (is_competitive(m) ? 6u : 5u));
    for (const char* n : {"w_H", "w_L", "tau_H", "tau_L", "p1"}) CHECK(s.get(n).ok());
  }
}

TEST_CASE("Model V at k = 0 keeps the printed extra terms") {
  ModelParams p;
  p.k = 0.0;
  const auto four = closed_form_values(ModelId::IV, p);
  const auto five = closed_form_values(ModelId::V, p);
  CHECK(five.get("w_H").value == doctest::Approx(four.get("w_H").value));
  CHECK(five.get("tau_H").value == doctest::Approx(four.get("tau_H").value));
  // (4 - eps^2) k - eps over eps^2 - 4 mu leaves -eps / (eps^2 - 4 mu).
  const double extra = -p.eps / (p.eps * p.eps - 4 * p.mu);
  CHECK(five.get("tau_L").value - four.get("tau_L").value == doctest::Approx(extra));
}
