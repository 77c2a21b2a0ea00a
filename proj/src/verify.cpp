#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rsc/errors.hpp"
#include "rsc/oracle.hpp"

namespace rsc {

namespace {

using Vec = std::vector<double>;
using Fn = std::function<double(const Vec&)>;

struct Constraint {
  std::string name;
  Fn g;  // feasible when g >= 0
};

double scale_of(double x) { return std::max(1.0, std::abs(x)); }

Vec gradient(const Fn& f, const Vec& x, double rel_step) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = rel_step * scale_of(x[i]);
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

double norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Vectors closer than `rel` (relative) to an earlier one are dropped.
std::vector<Vec> distinct(const std::vector<Vec>& vs, double rel) {
  std::vector<Vec> out;
  for (const auto& v : vs) {
    bool dup = false;
    for (const auto& u : out) {
      Vec d = v;
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= u[i];
      if (norm(d) <= rel * std::max(1.0, norm(u))) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(v);
  }
  return out;
}

// Distance from the origin to conv{objective} + cone{constraint}: zero at a
// (Clarke) KKT point of max f s.t. c >= 0. Supports of size at most n + 1
// suffice (Caratheodory in the homogenized space), so they are enumerated and
// each solved as an equality-constrained least-squares problem.
double kkt_distance(const std::vector<Vec>& objective, const std::vector<Vec>& constraint) {
  const std::size_t n = objective.front().size();
  std::vector<Vec> cols;
  for (const auto& a : constraint) {
    const double len = norm(a);
    if (len == 0.0) continue;
    Vec u = a;
    for (auto& x : u) x /= len;
    cols.push_back(u);
  }
  cols = distinct(cols, 1e-9);
  const std::size_t na = objective.size(), m = na + cols.size();
  auto column = [&](std::size_t j) -> const Vec& { return j < na ? objective[j] : cols[j - na]; };

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick;
  auto evaluate = [&] {
    const auto k = static_cast<Eigen::Index>(pick.size());
    Eigen::MatrixXd M(static_cast<Eigen::Index>(n), k);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const Vec& v = column(pick[static_cast<std::size_t>(c)]);
      for (std::size_t i = 0; i < n; ++i) M(static_cast<Eigen::Index>(i), c) = v[i];
      if (pick[static_cast<std::size_t>(c)] < na) e[c] = 1.0;
    }
    // Independent in the homogenized sense: columns (v, e) of the stacked matrix.
    Eigen::MatrixXd Me(static_cast<Eigen::Index>(n) + 1, k);
    Me.topRows(static_cast<Eigen::Index>(n)) = M;
    Me.bottomRows(1) = e.transpose();
    Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(Me);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) return;
    // min ||M z|| subject to e.z = 1, through its KKT system.
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k + 1, k + 1);
    K.topLeftCorner(k, k) = M.transpose() * M;
    K.topRightCorner(k, 1) = e;
    K.bottomLeftCorner(1, k) = e.transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    rhs[k] = 1.0;
    const Eigen::VectorXd z = K.fullPivLu().solve(rhs).head(k);
    if ((z.array() < -1e-12).any()) return;
    best = std::min(best, (M * z).norm());
  };
  // Every support holds at least one objective vector.
  std::function<void(std::size_t, bool)> rec = [&](std::size_t start, bool has_obj) {
    if (has_obj) evaluate();
    if (pick.size() == n + 1) return;
    for (std::size_t j = start; j < m; ++j) {
      pick.push_back(j);
      rec(j + 1, has_obj || j < na);
      pick.pop_back();
    }
  };
  rec(0, false);
  return best;
}

struct BoxBound {
  double lo, hi;
};

// Sample points: the solution itself, +/- each axis, and every box corner,
// at relative distance kSampleRadius.
constexpr double kSampleRadius = 1e-5;
constexpr double kGradientStep = 1e-7;

std::vector<Vec> sample_points(const Vec& x) {
  const std::size_t n = x.size();
  std::vector<Vec> pts{x};
  for (std::size_t i = 0; i < n; ++i) {
    for (double sgn : {-1.0, 1.0}) {
      Vec y = x;
      y[i] += sgn * kSampleRadius * scale_of(x[i]);
      pts.push_back(y);
    }
  }
  if (n > 1) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Vec y = x;
      for (std::size_t i = 0; i < n; ++i)
        y[i] += ((mask >> i) & 1u ? 1.0 : -1.0) * kSampleRadius * scale_of(x[i]) / std::sqrt(n);
      pts.push_back(y);
    }
  }
  return pts;
}

// Without `sampled`, gradients at the solution alone are used. With it, the
// objective may have kinks (projected recycling rates, switches between price
// pieces), so gradients are also sampled on a small neighbourhood and the
// residual is measured against their convex hull.
StageResidual stage(const std::string& name, const Fn& f, const Vec& x,
                    const std::vector<BoxBound>& box, const std::vector<Constraint>& cons,
                    const std::vector<std::string>& var_names, double tol, bool sampled) {
  StageResidual r;
  r.stage = name;
  try {
    r.gradient_norm = norm(gradient(f, x, kGradientStep));
  } catch (const DivergenceError&) {
    r.gradient_norm = std::numeric_limits<double>::quiet_NaN();
  }

  // Sample points without a follower equilibrium are dropped.
  std::vector<Vec> pts;
  std::vector<Vec> objective;
  for (const auto& y : sampled ? sample_points(x) : std::vector<Vec>{x}) {
    try {
      objective.push_back(gradient(f, y, kGradientStep));
      pts.push_back(y);
    } catch (const DivergenceError&) {
    }
  }

  std::vector<Vec> constraint;
  std::vector<std::string> active;
  for (const auto& c : cons) {
    if (c.g(x) > tol) continue;
    for (const auto& y : pts) {
      try {
        constraint.push_back(gradient(c.g, y, kGradientStep));
      } catch (const DivergenceError&) {
      }
    }
    active.push_back(c.name);
  }
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double reach = (sampled ? kSampleRadius : kGradientStep) * scale_of(x[i]);
    Vec e(x.size(), 0.0);
    if (x[i] - box[i].lo <= reach) {
      e[i] = 1.0;
      active.push_back(var_names[i] + "_lo");
    } else if (box[i].hi - x[i] <= reach) {
      e[i] = -1.0;
      active.push_back(var_names[i] + "_hi");
    } else {
      continue;
    }
    constraint.push_back(e);
  }
  r.kkt_residual = objective.empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : kkt_distance(distinct(objective, 1e-9), constraint);
  r.scaled = r.kkt_residual / std::max(1.0, std::abs(f(x)));
  for (std::size_t i = 0; i < active.size(); ++i) r.active += (i ? "|" : "") + active[i];
  if (r.active.empty()) r.active = "none";
  return r;
}

std::vector<Constraint> screening_constraints(
    const std::function<ScreeningReport(const Vec&)>& at) {
  std::vector<Constraint> out;
  for (auto c : kAllScreeningConstraints)
    out.push_back({std::string(to_string(c)), [at, c](const Vec& x) { return at(x).slack(c); }});
  return out;
}

Vec ordered_taus(ModelId model, const ModelParams& p, double q1, double w_H, double w_L) {
  return {tau_best_response(model, p, q1, w_H, p.beta_H),
          tau_best_response(model, p, q1, w_L, p.beta_L)};
}

}  // namespace

std::vector<StageResidual> stage_residuals(const Solution& s, const ModelParams& p,
                                           const SolveOptions& opts) {
  const ModelId model = s.model;
  const Bounds b = resolve_bounds(p, opts);
  const double tol = opts.tolerance;
  std::vector<StageResidual> out;

  if (!is_competitive(model)) {
    auto menu_of = [](const Vec& x) { return ContractMenu{x[3], x[4], x[1], x[2]}; };
    auto prices_of = [](const Vec& x) { return PricePair{x[0], std::nullopt}; };
    const Fn f = [&](const Vec& x) { return chain_profit(model, p, menu_of(x), prices_of(x)); };
    const auto cons = screening_constraints([&](const Vec& x) {
      return screening_check(menu_of(x), p, prices_of(x), model, tol);
    });
    const Vec x{s.prices.p1, s.menu.tau_H, s.menu.tau_L, s.menu.w_H, s.menu.w_L};
    const double p_hi = std::min(b.p_hi, p.a);
    out.push_back(stage("chain", f, x,
                        {{b.p_lo, p_hi}, {0, 1}, {0, 1}, {b.w_lo, b.w_hi}, {b.w_lo, b.w_hi}},
                        cons, {"p1", "tau_H", "tau_L", "w_H", "w_L"}, tol, false));
    return out;
  }

  // Leader: follower equilibrium re-solved at every perturbed menu.
  {
    struct Eval {
      ContractMenu menu;
      PricePair prices;
    };
    auto follow = [&](const Vec& w) {
      const FollowerResult fr =
          follower_equilibrium(ContractMenu{w[0], w[1], 0.0, 0.0}, p, model, opts);
      return Eval{ContractMenu{w[0], w[1], fr.tau_H, fr.tau_L}, fr.prices};
    };
    const Fn f = [&](const Vec& w) {
      const Eval e = follow(w);
      return manufacturer_profit(model, p, e.menu, e.prices);
    };
    const auto cons = screening_constraints([&](const Vec& w) {
      const Eval e = follow(w);
      return screening_check(e.menu, p, e.prices, model, tol);
    });
    out.push_back(stage("leader", f, {s.menu.w_H, s.menu.w_L},
                        {{b.w_lo, b.w_hi}, {b.w_lo, b.w_hi}}, cons, {"w_H", "w_L"}, tol, true));
  }

  const double p2 = s.prices.p2.value();
  {
    const Fn f = [&](const Vec& x) {
      return retailer1_profit(model, p, ContractMenu{s.menu.w_H, s.menu.w_L, x[1], x[2]},
                              PricePair{x[0], p2});
    };
    const double p_hi = std::min(b.p_hi, p.a + p.eps * p2);
    out.push_back(stage("retailer1", f, {s.prices.p1, s.menu.tau_H, s.menu.tau_L},
                        {{b.p_lo, p_hi}, {0, 1}, {0, 1}}, {}, {"p1", "tau_H", "tau_L"}, tol, false));
  }
  {
    const Fn f = [&](const Vec& x) {
      return retailer2_profit(model, p, PricePair{s.prices.p1, x[0]});
    };
    const double p_hi = std::min(b.p_hi, p.a + p.eps * s.prices.p1);
    out.push_back(stage("retailer2", f, {p2}, {{b.p_lo, p_hi}}, {}, {"p2"}, tol, false));
  }
  return out;
}

NashCheck verify_nash(const Solution& s, const ModelParams& p, int deviations,
                      double bracket) {
  NashCheck out;
  if (!is_competitive(s.model)) return out;
  if (deviations < 2) throw StructuralError("verify_nash: need at least 2 deviations");
  out.deviations = deviations;
  const ModelId model = s.model;
  const double p1 = s.prices.p1, p2 = s.prices.p2.value();

  const double r1_eq = retailer1_profit(model, p, s.menu, s.prices);
  const double r2_eq = retailer2_profit(model, p, s.prices);
  out.max_gain_retailer1 = -std::numeric_limits<double>::infinity();
  out.max_gain_retailer2 = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < deviations; ++i) {
    const double frac = bracket * (2.0 * i / (deviations - 1) - 1.0);
    const double d1 = p1 + frac * std::max(std::abs(p1), 1e-3);
    const PricePair dev1{d1, p2};
    const Vec taus =
        ordered_taus(model, p, retailer1_demand(p, dev1, model), s.menu.w_H, s.menu.w_L);
    const ContractMenu m1{s.menu.w_H, s.menu.w_L, taus[0], taus[1]};
    out.max_gain_retailer1 =
        std::max(out.max_gain_retailer1, retailer1_profit(model, p, m1, dev1) - r1_eq);

    const double d2 = p2 + frac * std::max(std::abs(p2), 1e-3);
    out.max_gain_retailer2 =
        std::max(out.max_gain_retailer2, retailer2_profit(model, p, PricePair{p1, d2}) - r2_eq);
  }
  return out;
}

}  // namespace rsc
