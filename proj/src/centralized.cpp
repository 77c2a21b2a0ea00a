#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "rsc/errors.hpp"
#include "rsc/oracle.hpp"
#include "zoom_search.hpp"

namespace rsc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Half-plane gx * u_H + gy * u_L >= rhs.
struct Line {
  const char* name;
  double gx, gy, rhs;
  double slack(double uh, double ul) const { return gx * uh + gy * ul - rhs; }
};

// Transfers u_t = q1 tau_t (w_t - c) keep retailer 1's payoff linear, so the
// screening constraints and the w box are half-planes in (u_H, u_L).
std::array<Line, 8> buy_back_lines(const ModelParams& p, double p1, double tau_H,
                                   double tau_L, const Bounds& b, double m_H, double m_L) {
  const double q = p.a - p1;
  const double base = p.pi_R0 - q * (p1 - p.p_m);
  const double delta = tau_H * tau_H - tau_L * tau_L;
  auto box = [&](double m, bool upper) {
    const double lo = m * (b.w_lo - p.c), hi = m * (b.w_hi - p.c);
    return upper ? std::max(lo, hi) : std::min(lo, hi);
  };
  return {{
      {"ir_L", 0.0, 1.0, base + p.beta_L * tau_L * tau_L},
      {"ir_H", 1.0, 0.0, base + p.beta_H * tau_H * tau_H},
      {"ic_H", 1.0, -1.0, p.beta_H * delta},
      {"ic_L", -1.0, 1.0, -p.beta_L * delta},
      {"w_H_lo", 1.0, 0.0, box(m_H, false)},
      {"w_H_hi", -1.0, 0.0, -box(m_H, true)},
      {"w_L_lo", 0.0, 1.0, box(m_L, false)},
      {"w_L_hi", 0.0, -1.0, -box(m_L, true)},
  }};
}

double recover_w(double u, double m, const ModelParams& p, const Bounds& b) {
  if (m == 0.0) return b.w_lo;
  return std::clamp(p.c + u / m, b.w_lo, b.w_hi);
}

}  // namespace

std::optional<BuyBack> minimal_buy_back(ModelId model, const ModelParams& p, double p1,
                                        double tau_H, double tau_L, const Bounds& b,
                                        double tol) {
  if (is_competitive(model))
    throw StructuralError("minimal_buy_back applies to Models I-II");
  const double q = p.a - p1;
  const double m_H = q * tau_H, m_L = q * tau_L;
  const auto lines = buy_back_lines(p, p1, tau_H, tau_L, b, m_H, m_L);
  const double w_H = type_weight(p, RetailerType::H), w_L = type_weight(p, RetailerType::L);

  auto feasible = [&](double uh, double ul) {
    for (const auto& l : lines) {
      const double scale = std::max({1.0, std::abs(l.rhs), std::abs(uh), std::abs(ul)});
      if (l.slack(uh, ul) < -1e-12 * scale) return false;
    }
    return true;
  };

  bool found = false;
  double best_obj = 0.0, best_uh = 0.0, best_ul = 0.0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const Line& A = lines[i];
      const Line& B = lines[j];
      const double det = A.gx * B.gy - A.gy * B.gx;
      if (det == 0.0) continue;
      const double uh = (A.rhs * B.gy - A.gy * B.rhs) / det;
      const double ul = (A.gx * B.rhs - A.rhs * B.gx) / det;
      if (!std::isfinite(uh) || !std::isfinite(ul) || !feasible(uh, ul)) continue;
      const double obj = w_H * uh + w_L * ul;
      const bool better = !found || obj < best_obj ||
                          (obj == best_obj && (uh < best_uh || (uh == best_uh && ul < best_ul)));
      if (better) {
        found = true;
        best_obj = obj;
        best_uh = uh;
        best_ul = ul;
      }
    }
  }
  if (!found) return std::nullopt;

  BuyBack bb;
  bb.w_H = recover_w(best_uh, m_H, p, b);
  bb.w_L = recover_w(best_ul, m_L, p, b);
  for (const auto& l : lines) {
    const double scale = std::max({1.0, std::abs(l.rhs)});
    if (std::abs(l.slack(best_uh, best_ul)) <= tol * scale) {
      if (!bb.binding.empty()) bb.binding += '|';
      bb.binding += l.name;
    }
  }
  if (bb.binding.empty()) bb.binding = "none";
  return bb;
}

namespace {

// a t^2 + b t + c <= 0 in t = tau_H.
struct Quadratic {
  double a, b, c;
  double at(double t) const { return (a * t + b) * t + c; }
  double scale(double t) const {
    return std::max({1.0, std::abs(a * t * t), std::abs(b * t), std::abs(c)});
  }
};

// Feasibility of the buy-back LP at fixed (p1, tau_L) as conditions on tau_H:
// u_t ranges over [max(IR bound, box low), box high] and u_H - u_L must meet
// both IC bounds.
struct TauHConditions {
  bool tau_L_ok = true;
  std::vector<Quadratic> conds;

  TauHConditions(const ModelParams& p, double p1, double tau_L, const Bounds& b) {
    const double q = p.a - p1;
    const double s = q * (p1 - p.p_m) - p.pi_R0;
    const double wp = b.w_hi - p.c, wm = b.w_lo - p.c;
    const double U_L = q * wp * tau_L;
    const double L_L = std::max(p.beta_L * tau_L * tau_L - s, q * wm * tau_L);
    const double L2 = tau_L * tau_L;
    tau_L_ok = L_L - U_L <= 1e-12 * std::max({1.0, std::abs(L_L), std::abs(U_L)});
    const double dB = p.beta_H - p.beta_L;
    conds = {
        {p.beta_H, -q * wp, -s},                          // IR_H within the box
        {dB, 0.0, -dB * L2},                              // IC bounds ordered
        {dB, 0.0, -s - U_L + p.beta_L * L2},              // IR_H vs IC_L
        {-p.beta_L, q * wm, -U_L + p.beta_L * L2},        // box low vs IC_L
        {p.beta_H, -q * wp, L_L - p.beta_H * L2},         // IC_H vs IR_L
    };
  }

  bool holds(double t) const {
    if (!tau_L_ok) return false;
    for (const auto& c : conds)
      if (c.at(t) > 1e-12 * c.scale(t)) return false;
    return true;
  }

  void roots(std::vector<double>& out) const {
    for (const auto& c : conds) {
      if (c.a == 0.0) {
        if (c.b != 0.0) out.push_back(-c.c / c.b);
        continue;
      }
      const double disc = c.b * c.b - 4.0 * c.a * c.c;
      if (disc < 0.0) continue;
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (c.b + std::copysign(sq, c.b));
      out.push_back(q / c.a);
      if (q != 0.0) out.push_back(c.c / q);
    }
  }
};

struct InnerBest {
  bool feasible = false;
  double tau_H = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

// Exact maximizer over tau_H: the chain profit is a concave quadratic in
// tau_H, so the optimum is its vertex or an endpoint of a feasible interval.
InnerBest best_tau_H(ModelId model, const ModelParams& p, double p1, double tau_L,
                     const Bounds& b) {
  InnerBest out;
  const TauHConditions cond(p, p1, tau_L, b);
  if (!cond.tau_L_ok) return out;
  auto value = [&](double t) {
    return chain_profit(model, p, ContractMenu{p.c, p.c, t, tau_L},
                        PricePair{p1, std::nullopt});
  };
  std::vector<double> cand{0.0, 1.0};
  cond.roots(cand);
  const double v0 = value(0.0), vh = value(0.5), v1 = value(1.0);
  // v(t) = A t^2 + B t + v0
  const double A = 2.0 * (v1 - 2.0 * vh + v0);
  const double B = v1 - v0 - A;
  if (A < 0.0) cand.push_back(-B / (2.0 * A));
  std::sort(cand.begin(), cand.end());
  for (double t : cand) {
    if (!(t >= 0.0 && t <= 1.0) || !cond.holds(t)) continue;
    const double v = value(t);
    if (!out.feasible || v > out.value) out = InnerBest{true, t, v};
  }
  return out;
}

}  // namespace

Solution centralized_optimize(ModelId model, const ModelParams& p, const SolveOptions& opts) {
  if (is_competitive(model))
    throw StructuralError("centralized_optimize applies to Models I-II; use leader_optimize");
  if (auto bad = validate(opts); !bad.empty()) throw ConfigError(bad);
  if (auto bad = validate(p); !bad.empty()) throw ConfigError(bad);

  const Bounds b = resolve_bounds(p, opts);
  // Prices above a would mean negative demand.
  const double p_hi = std::max(b.p_lo, std::min(b.p_hi, p.a));
  const detail::ZoomSettings zt{opts.tau_grid, opts.refine_grid, opts.refine_iterations, 1};

  // Nested search: p1 outside, tau_L inside, tau_H exact.
  auto best_tau_L = [&](double p1) {
    return detail::zoom_search<1>({0.0}, {1.0}, zt, [&](const std::array<double, 1>& t) {
      const InnerBest ib = best_tau_H(model, p, p1, t[0], b);
      return ib.feasible ? ib.value : kNegInf;
    });
  };
  const detail::ZoomSettings zouter{opts.price_grid, opts.refine_grid, opts.refine_iterations,
                                    opts.threads};
  const auto best = detail::zoom_search<1>({b.p_lo}, {p_hi}, zouter,
                                           [&](const std::array<double, 1>& x) {
                                             return best_tau_L(x[0]).score;
                                           });
  if (!std::isfinite(best.score)) {
    // Report the closest miss with both buy-back prices at their cap.
    double best_min_slack = kNegInf;
    ScreeningConstraint worst = ScreeningConstraint::ir_L;
    for (const auto& x : detail::lattice<3>({b.p_lo, 0.0, 0.0}, {p_hi, 1.0, 1.0}, 21)) {
      const ContractMenu menu{b.w_hi, b.w_hi, x[1], x[2]};
      const auto r = screening_check(menu, p, PricePair{x[0], std::nullopt}, model,
                                     opts.tolerance);
      if (r.min_slack() > best_min_slack) {
        best_min_slack = r.min_slack();
        worst = r.most_violated();
      }
    }
    throw InfeasibleError(std::string(to_string(worst)), best_min_slack);
  }

  const double p1 = best.x[0];
  const double tau_L = best_tau_L(p1).x[0];
  const double tau_H = best_tau_H(model, p, p1, tau_L, b).tau_H;
  const auto bb = minimal_buy_back(model, p, p1, tau_H, tau_L, b, opts.tolerance);
  if (!bb) throw InfeasibleError("buy_back", 0.0);
  const ContractMenu menu{bb->w_H, bb->w_L, tau_H, tau_L};
  Solution s = evaluate_solution(model, p, menu, PricePair{p1, std::nullopt},
                                 Provenance::oracle, opts.tolerance);
  s.notes.push_back("buy-back binding " + bb->binding);
  if (opts.compute_residuals) s.residuals = stage_residuals(s, p, opts);
  return s;
}

}  // namespace rsc
