#include "rsc/cross_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsc {

namespace {

double oracle_value(const Solution& s, const std::string& name) {
  if (name == "w_H") return s.menu.w_H;
  if (name == "w_L") return s.menu.w_L;
  if (name == "tau_H") return s.menu.tau_H;
  if (name == "tau_L") return s.menu.tau_L;
  if (name == "p1") return s.prices.p1;
  if (name == "p2") return s.prices.p2.value_or(std::numeric_limits<double>::quiet_NaN());
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double CrossCheckReport::max_abs_dev() const {
  double m = 0.0;
  for (const auto& e : entries)
    if (std::isfinite(e.abs_dev)) m = std::max(m, e.abs_dev);
  return m;
}

CrossCheckReport cross_check(ModelId model, const ModelParams& p, const Solution& oracle) {
  CrossCheckReport r;
  r.model = model;
  r.oracle = oracle;
  const ClosedFormSet set = closed_form_values(model, p);
  for (const auto& v : set.values) {
    CrossCheckEntry e;
    e.name = v.name;
    e.closed_form = v.value;
    e.oracle = oracle_value(oracle, v.name);
    e.abs_dev = std::abs(e.closed_form - e.oracle);
    e.rel_dev = e.abs_dev / std::max(1.0, std::abs(e.oracle));
    e.status = v.ok() ? "finite" : "singular: " + v.singular;
    r.entries.push_back(e);
  }
  if (set.all_ok()) {
    const Solution cf = closed_form(model, p);
    r.closed_form_feasible = cf.screening.feasible;
    r.closed_form_warnings = cf.warnings;
  }
  return r;
}

CrossCheckReport cross_check(ModelId model, const ModelParams& p, const SolveOptions& opts) {
  return cross_check(model, p, oracle_solve(model, p, opts));
}

}  // namespace rsc
