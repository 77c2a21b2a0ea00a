#include "rsc/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "rsc/closed_form.hpp"
#include "rsc/errors.hpp"

namespace rsc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double solution_value(const Solution& s, std::string_view name) {
  if (name == "w_H") return s.menu.w_H;
  if (name == "w_L") return s.menu.w_L;
  if (name == "tau_H") return s.menu.tau_H;
  if (name == "tau_L") return s.menu.tau_L;
  if (name == "p1") return s.prices.p1;
  if (name == "p2") return s.prices.p2.value_or(kNaN);
  throw std::out_of_range("unknown decision variable " + std::string(name));
}

struct Value {
  double v = kNaN;
  std::string singular;
};

// Decision values per model from one source, computed once per model.
class ValueSource {
 public:
  ValueSource(const ModelParams& p, Provenance src, const SolveOptions& opts)
      : p_(p), src_(src), opts_(opts) {
    opts_.compute_residuals = false;
  }

  Value get(ModelId m, std::string_view name) {
    if (src_ == Provenance::closed_form) {
      auto it = cf_.find(m);
      if (it == cf_.end()) it = cf_.emplace(m, closed_form_values(m, p_)).first;
      const ClosedFormValue& v = it->second.get(name);
      return Value{v.value, v.singular};
    }
    auto it = oracle_.find(m);
    if (it == oracle_.end()) it = oracle_.emplace(m, oracle_solve(m, p_, opts_)).first;
    return Value{solution_value(it->second, name), {}};
  }

 private:
  ModelParams p_;
  Provenance src_;
  SolveOptions opts_;
  std::map<ModelId, ClosedFormSet> cf_;
  std::map<ModelId, Solution> oracle_;
};

Inequality cond(std::string name, double lhs, char dir, double rhs) {
  return Inequality{std::move(name), lhs, rhs, dir, {}};
}

// x(first) - x(second) compared against zero.
Inequality difference(ValueSource& vs, std::string_view var, ModelId first, ModelId second,
                      char dir) {
  const Value a = vs.get(first, var);
  const Value b = vs.get(second, var);
  Inequality q;
  q.name = std::string(var) + "(" + std::string(to_string(first)) + ") - " + std::string(var) +
           "(" + std::string(to_string(second)) + ")";
  q.lhs = a.v - b.v;
  q.rhs = 0.0;
  q.direction = dir;
  q.singular = !a.singular.empty() ? a.singular : b.singular;
  return q;
}

Claim claim(std::string name, std::vector<Inequality> ante, Inequality concl) {
  Claim c{std::move(name), std::move(ante), std::move(concl), Verdict::vacuous};
  bool active = true;
  for (const auto& a : c.antecedents) active = active && a.pass();
  if (!active)
    c.verdict = Verdict::vacuous;
  else if (!c.conclusion.singular.empty())
    c.verdict = Verdict::singular;
  else
    c.verdict = c.conclusion.pass() ? Verdict::holds : Verdict::fails;
  return c;
}

Verdict aggregate(const std::vector<Claim>& claims) {
  bool any_holds = false, any_fails = false, any_singular = false;
  for (const auto& c : claims) {
    any_holds = any_holds || c.verdict == Verdict::holds;
    any_fails = any_fails || c.verdict == Verdict::fails;
    any_singular = any_singular || c.verdict == Verdict::singular;
  }
  if (any_singular) return Verdict::singular;
  if (any_fails) return Verdict::fails;
  return any_holds ? Verdict::holds : Verdict::vacuous;
}

std::vector<Claim> prop1(const ModelParams& p, ValueSource& vs, std::vector<std::string>&) {
  const double D = p.beta_L - p.mu * p.beta_H;
  const double thr = D / (1.0 + D);
  const double fem = p.f * p.e_m;
  const std::string thr_name = "f*e_m vs (beta_L - mu*beta_H)/(1 + beta_L - mu*beta_H)";
  return {
      claim("w_H larger in II", {cond(thr_name, fem, '<', thr)},
            difference(vs, "w_H", ModelId::II, ModelId::I, '>')),
      claim("w_H smaller in II", {cond(thr_name, fem, '>', thr)},
            difference(vs, "w_H", ModelId::II, ModelId::I, '<')),
      claim("w_L smaller in II",
            {cond("-f*e_m", -fem, '<', 0.0), cond("beta_L - mu*beta_H", D, '>', 0.0)},
            difference(vs, "w_L", ModelId::II, ModelId::I, '<')),
  };
}

std::vector<Claim> prop2(const ModelParams& p, ValueSource& vs, std::vector<std::string>&) {
  const double fem = p.f * p.e_m;
  return {
      claim("tau_H smaller in II",
            {cond("beta_H", p.beta_H, '>', 0.0), cond("-f*e_m", -fem, '<', 0.0)},
            difference(vs, "tau_H", ModelId::II, ModelId::I, '<')),
      claim("tau_L smaller in II",
            {cond("-f*e_m", -fem, '<', 0.0),
             cond("beta_L - mu*beta_H", p.beta_L - p.mu * p.beta_H, '>', 0.0)},
            difference(vs, "tau_L", ModelId::II, ModelId::I, '<')),
  };
}

std::vector<Claim> prop3(const ModelParams& p, ValueSource& vs,
                         std::vector<std::string>& notes) {
  const double c2 = p.c * p.c, bH = p.beta_H, bL = p.beta_L, mu = p.mu;
  const double lhs2 = bH * (4 * bL - c2 - bL * bL + mu * bL);
  const double rhs2 = bL * (mu * c2 - mu * bH * bH);
  const double thr = p.e_0 / bL;
  const std::string n2 = "beta_H(4 beta_L - c^2 - beta_L^2 + mu beta_L) vs beta_L(mu c^2 - mu beta_H^2)";
  if (!(lhs2 < rhs2)) notes.push_back("condition 2 is not satisfied at these parameters");
  std::vector<Claim> out;
  for (const char* var : {"w_H", "w_L"}) {
    out.push_back(claim(std::string(var) + " larger in IV",
                        {cond("e_m vs e_0/beta_L", p.e_m, '<', thr), cond(n2, lhs2, '<', rhs2)},
                        difference(vs, var, ModelId::IV, ModelId::III, '>')));
    out.push_back(claim(std::string(var) + " smaller in IV",
                        {cond("e_m vs e_0/beta_L", p.e_m, '>', thr), cond(n2, lhs2, '<', rhs2)},
                        difference(vs, var, ModelId::IV, ModelId::III, '<')));
  }
  return out;
}

std::vector<Claim> prop4(const ModelParams& p, ValueSource& vs, std::vector<std::string>&) {
  const double fem = p.f * p.e_m;
  const double g = p.eps * p.eps - 4 * p.mu;
  return {
      claim("tau_H larger in IV",
            {cond("beta_H*f*e_m", p.beta_H * fem, '>', 0.0), cond("mu", p.mu, '>', 0.0),
             cond("beta_H", p.beta_H, '>', 0.0),
             cond("(eps - 2*mu)^2", (p.eps - 2 * p.mu) * (p.eps - 2 * p.mu), '>', 0.0)},
            difference(vs, "tau_H", ModelId::IV, ModelId::III, '>')),
      claim("tau_L larger in IV",
            {cond("beta_H vs beta_L", p.beta_H, '>', p.beta_L), cond("mu", p.mu, '>', 0.0),
             cond("eps^2 - 4*mu", g, '>', 0.0)},
            difference(vs, "tau_L", ModelId::IV, ModelId::III, '>')),
      claim("tau_L smaller in IV",
            {cond("beta_H vs beta_L", p.beta_H, '>', p.beta_L), cond("mu", p.mu, '>', 0.0),
             cond("eps^2 - 4*mu", g, '<', 0.0)},
            difference(vs, "tau_L", ModelId::IV, ModelId::III, '<')),
  };
}

std::vector<Claim> prop5(const ModelParams& p, ValueSource& vs, std::vector<std::string>&) {
  const double S = p.p_m + p.c_m + p.c_r + p.c_d - p.c;
  auto ante = [&] {
    return std::vector<Inequality>{cond("f*e_m", p.f * p.e_m, '>', 0.0),
                                   cond("f*e_0", p.f * p.e_0, '>', 0.0),
                                   cond("a - eps", p.a - p.eps, '>', 0.0),
                                   cond("(p_m + c_m + c_r + c_d - c)^2", S * S, '>', 0.0)};
  };
  return {
      claim("p1 larger in IV", ante(), difference(vs, "p1", ModelId::IV, ModelId::III, '>')),
      claim("p2 larger in IV", ante(), difference(vs, "p2", ModelId::IV, ModelId::III, '>')),
  };
}

std::vector<Claim> prop6(const ModelParams& p, ValueSource& vs, std::vector<std::string>&) {
  const double c2 = p.c * p.c, bL = p.beta_L, mu = p.mu, e = p.eps;
  const double A = 4 * bL - c2 - bL * bL;
  return {
      claim("w_H larger in V (high fixed cost)",
            {cond("4*beta_L - c^2 - beta_L^2", A, '>', 0.0),
             cond("4*beta_L - c^2 - beta_L^2 vs c^2*mu", A, '>', c2 * mu)},
            difference(vs, "w_H", ModelId::V, ModelId::IV, '>')),
      claim("w_L larger in V (low fixed cost)",
            {cond("2 - eps^2 - 2*mu^2", 2 - e * e - 2 * mu * mu, '>', 0.0),
             cond("4*beta_L - c^2 - beta_L^2 + beta_L*mu", A + bL * mu, '>', 0.0)},
            difference(vs, "w_L", ModelId::V, ModelId::IV, '>')),
  };
}

std::vector<Claim> prop7(const ModelParams& p, ValueSource& vs,
                         std::vector<std::string>& notes) {
  const double e2 = p.eps * p.eps;
  const double thr = e2 / (4 - e2);
  notes.push_back("tau_L threshold k vs eps^2/(4 - eps^2); the statement prints eps^2/4 - eps^2 = " +
                  fmt(e2 / 4 - e2));
  return {
      claim("tau_H larger in V",
            {cond("8 - eps^2", 8 - e2, '>', 0.0), cond("k", p.k, '>', 0.0),
             cond("(eps - 2*mu)^2", (p.eps - 2 * p.mu) * (p.eps - 2 * p.mu), '>', 0.0)},
            difference(vs, "tau_H", ModelId::V, ModelId::IV, '>')),
      claim("tau_L larger in V",
            {cond("eps^2 - 4*mu", e2 - 4 * p.mu, '>', 0.0),
             cond("k vs eps^2/(4 - eps^2)", p.k, '>', thr)},
            difference(vs, "tau_L", ModelId::V, ModelId::IV, '>')),
      claim("tau_L smaller in V",
            {cond("eps^2 - 4*mu", e2 - 4 * p.mu, '>', 0.0),
             cond("k vs eps^2/(4 - eps^2)", p.k, '<', thr)},
            difference(vs, "tau_L", ModelId::V, ModelId::IV, '<')),
  };
}

std::vector<Claim> prop8(const ModelParams& p, ValueSource& vs, std::vector<std::string>&) {
  const double S = p.p_m + p.c_m + p.c_r + p.c_d - p.c;
  const double Y = p.c_m + p.c_r + p.c_d - p.c;
  const double fe0 = p.f * p.e_0;
  const double t1 = (2 - S * S) * fe0 / Y;
  const double t2 = 3 * fe0 / Y - fe0 * S * S / (p.beta_H * (p.a - p.eps) * Y) + p.eps;
  const std::string n1 = "k vs [2 - (p_m + c_m + c_r + c_d - c)^2] f e_0/(c_m + c_r + c_d - c)";
  const std::string n2 =
      "k vs 3 f e_0/(c_m + c_r + c_d - c) - f e_0 (p_m + c_m + c_r + c_d - c)^2/"
      "(beta_H (a - eps)(c_m + c_r + c_d - c)) + eps";
  return {
      claim("p1 lower in V", {cond(n1, p.k, '<', t1)},
            difference(vs, "p1", ModelId::V, ModelId::IV, '<')),
      claim("p1 higher in V", {cond(n1, p.k, '>', t1)},
            difference(vs, "p1", ModelId::V, ModelId::IV, '>')),
      claim("p2 lower in V", {cond(n2, p.k, '<', t2)},
            difference(vs, "p2", ModelId::V, ModelId::IV, '<')),
      claim("p2 higher in V", {cond(n2, p.k, '>', t2)},
            difference(vs, "p2", ModelId::V, ModelId::IV, '>')),
  };
}

}  // namespace

ModelParams random_params(std::mt19937_64& rng) {
  ModelParams p;
  p.a = uniform(rng, 2.0, 6.0);
  p.eps = uniform(rng, 0.05, 0.9);
  p.c = uniform(rng, 0.2, 2.0);
  p.c_d = uniform(rng, 0.1, 1.5);
  p.c_r = uniform(rng, 0.1, 1.5);
  p.c_m = uniform(rng, 1.0, 5.0);
  p.p_m = uniform(rng, 0.2, p.a / 2);
  p.mu = uniform(rng, 0.1, 0.9);
  p.beta_L = uniform(rng, 0.3, 2.0);
  p.beta_H = p.beta_L + uniform(rng, 0.05, 1.0);
  p.pi_R0 = uniform(rng, 0.0, 0.5);
  p.f = uniform(rng, 0.0, 3.0);
  p.k = uniform(rng, 0.0, 3.0);
  p.e_m = uniform(rng, 0.1, 1.0);
  p.e_0 = uniform(rng, 0.0, 2.0);
  p.tau_0 = uniform(rng, 0.2, 0.9);
  p.p1 = uniform(rng, p.p_m, p.a);
  p.p2 = p.p1 + 0.2;
  return p;
}

std::vector<ModelParams> feasible_draws(std::size_t n, std::uint64_t seed,
                                        const std::function<bool(const ModelParams&)>& accept,
                                        std::size_t max_attempts) {
  std::mt19937_64 rng(seed);
  std::vector<ModelParams> out;
  for (std::size_t attempt = 0; out.size() < n; ++attempt) {
    if (attempt == max_attempts)
      throw std::runtime_error("only " + std::to_string(out.size()) + " of " +
                               std::to_string(n) + " feasible draws after " +
                               std::to_string(max_attempts) + " attempts");
    ModelParams p = random_params(rng);
    if (validate(p).empty() && (!accept || accept(p))) out.push_back(p);
  }
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::vacuous: return "vacuous";
    case Verdict::singular: return "singular";
  }
  return "?";
}

bool Inequality::pass() const {
  if (!singular.empty()) return false;
  return direction == '<' ? lhs < rhs : lhs > rhs;
}

PropositionReport check_proposition(int n, const ModelParams& p, Provenance source,
                                    const SolveOptions& opts) {
  if (n < 1 || n > 8) throw std::invalid_argument("proposition must be 1-8");
  if (auto bad = validate(p); !bad.empty()) throw ConfigError(bad);
  ValueSource vs(p, source, opts);
  PropositionReport r;
  r.id = n;
  r.source = source;
  using Builder = std::vector<Claim> (*)(const ModelParams&, ValueSource&,
                                         std::vector<std::string>&);
  static constexpr Builder builders[] = {prop1, prop2, prop3, prop4,
                                         prop5, prop6, prop7, prop8};
  r.claims = builders[n - 1](p, vs, r.notes);
  r.verdict = aggregate(r.claims);
  return r;
}

const ComparisonRow& ModelComparison::get(std::string_view name) const {
  for (const auto& r : rows)
    if (r.name == name) return r;
  throw std::out_of_range("comparison has no row " + std::string(name));
}

ModelComparison compare_models(const ModelParams& p, ModelId first, ModelId second,
                               Provenance source, const SolveOptions& opts) {
  auto solve = [&](ModelId m) {
    if (source == Provenance::closed_form) return closed_form(m, p);
    SolveOptions o = opts;
    o.compute_residuals = false;
    return oracle_solve(m, p, o);
  };
  const Solution a = solve(first);
  const Solution b = solve(second);
  const bool both = is_competitive(first) && is_competitive(second);

  ModelComparison c{first, second, source, {}};
  auto row = [&](std::string name, double x, double y) {
    c.rows.push_back(ComparisonRow{std::move(name), x, y, x - y});
  };
  for (const char* v : {"w_H", "w_L", "tau_H", "tau_L", "p1"})
    row(v, solution_value(a, v), solution_value(b, v));
  if (both) row("p2", *a.prices.p2, *b.prices.p2);
  row("manufacturer", a.profits.manufacturer, b.profits.manufacturer);
  row("retailer1", a.profits.retailer1, b.profits.retailer1);
  if (both) row("retailer2", a.profits.retailer2, b.profits.retailer2);
  row("chain", a.profits.chain, b.profits.chain);
  return c;
}

std::string_view to_string(SweepGrid g) {
  return g == SweepGrid::paired ? "paired" : "cartesian";
}

std::optional<SweepGrid> parse_sweep_grid(std::string_view s) {
  if (s == "paired") return SweepGrid::paired;
  if (s == "cartesian") return SweepGrid::cartesian;
  return std::nullopt;
}

SweepTable sweep(const ModelParams& p, const std::vector<double>& f_values,
                 const std::vector<double>& k_values, Provenance source, SweepGrid grid,
                 const SolveOptions& opts) {
  if (f_values.empty() || k_values.empty())
    throw std::invalid_argument("sweep grid is empty: f and k need at least one value each");
  std::vector<std::pair<double, double>> cells;
  if (grid == SweepGrid::paired) {
    if (f_values.size() != k_values.size())
      throw std::invalid_argument("paired sweep needs f and k lists of equal length");
    for (std::size_t i = 0; i < f_values.size(); ++i) cells.emplace_back(f_values[i], k_values[i]);
  } else {
    for (double f : f_values)
      for (double k : k_values) cells.emplace_back(f, k);
  }

  SolveOptions o = opts;
  o.compute_residuals = false;
  SweepTable t{source, {}};
  for (const auto& [f, k] : cells) {
    ModelParams q = p;
    q.f = f;
    q.k = k;
    SweepRow row{f, k, {}, "ok"};
    row.values.fill(kNaN);
    const std::array<ModelId, 2> models{ModelId::IV, ModelId::V};
    const std::array<const char*, 4> vars{"w_H", "w_L", "tau_H", "tau_L"};
    for (std::size_t m = 0; m < 2; ++m) {
      if (source == Provenance::closed_form) {
        const ClosedFormSet set = closed_form_values(models[m], q);
        for (std::size_t j = 0; j < 4; ++j) {
          const ClosedFormValue& v = set.get(vars[j]);
          row.values[4 * m + j] = v.value;
          if (!v.ok() && row.status == "ok") row.status = "singular: " + v.singular;
        }
      } else {
        try {
          const Solution s = oracle_solve(models[m], q, o);
          for (std::size_t j = 0; j < 4; ++j) row.values[4 * m + j] = solution_value(s, vars[j]);
        } catch (const std::exception& e) {
          if (row.status == "ok")
            row.status = "Model " + std::string(to_string(models[m])) + ": " + e.what();
        }
      }
    }
    t.rows.push_back(row);
  }
  return t;
}

const std::vector<TableReferenceRow>& table1_reference() {
  static const std::vector<TableReferenceRow> rows = {
      {3, 2, {3.8, 2.9, 0.38, 0.21, 4.5, 3.3, 0.56, 0.43}},
      {5, 4, {4.0, 3.2, 0.42, 0.24, 5.3, 3.7, 0.63, 0.47}},
      {7, 6, {4.1, 3.3, 0.45, 0.28, 5.9, 4.6, 0.69, 0.56}},
      {9, 8, {4.3, 3.5, 0.49, 0.32, 6.8, 5.5, 0.78, 0.63}},
  };
  return rows;
}

std::vector<CellDeviation> reference_deviations(const SweepTable& t) {
  std::vector<CellDeviation> out;
  for (const auto& row : t.rows) {
    for (const auto& ref : table1_reference()) {
      if (ref.f != row.f || ref.k != row.k) continue;
      for (std::size_t j = 0; j < kSweepColumns.size(); ++j)
        out.push_back(CellDeviation{row.f, row.k, kSweepColumns[j], row.values[j],
                                    ref.values[j], row.values[j] - ref.values[j]});
    }
  }
  return out;
}

std::vector<OrderingCheck> ordering_checks(const SweepTable& t) {
  std::vector<OrderingCheck> out;
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double v4 = row.values[j], v5 = row.values[j + 4];
      OrderingCheck c;
      c.name = "f=" + fmt(row.f) + " k=" + fmt(row.k) + ": " + kSweepColumns[j + 4] + " > " +
               kSweepColumns[j];
      c.pass = v5 > v4;
      c.detail = fmt(v5) + " vs " + fmt(v4);
      out.push_back(c);
    }
  }
  for (std::size_t j = 0; j < kSweepColumns.size(); ++j) {
    OrderingCheck c;
    c.name = std::string(kSweepColumns[j]) + " nondecreasing";
    c.pass = true;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double v = t.rows[i].values[j];
      if (!std::isfinite(v)) c.pass = false;
      if (i > 0 && !(v >= t.rows[i - 1].values[j])) c.pass = false;
      c.detail += (i ? " " : "") + fmt(v);
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace rsc
