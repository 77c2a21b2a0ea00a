#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "rsc/errors.hpp"
#include "rsc/oracle.hpp"
#include "zoom_search.hpp"

namespace rsc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double penalty(const ScreeningReport& r) {
  double v = 0.0;
  for (auto c : kAllScreeningConstraints) {
    const double s = r.slack(c);
    if (s < 0.0) v += s * s;
  }
  return v;
}

struct MenuEvaluation {
  bool converged = false;
  double objective = kNegInf;
  ScreeningReport screening;
};

MenuEvaluation evaluate_menu(ModelId model, const ModelParams& p, const SolveOptions& opts,
                             double w_H, double w_L) {
  MenuEvaluation e;
  FollowerResult fr;
  try {
    fr = follower_equilibrium(ContractMenu{w_H, w_L, 0.0, 0.0}, p, model, opts);
  } catch (const DivergenceError&) {
    return e;
  }
  const ContractMenu menu{w_H, w_L, fr.tau_H, fr.tau_L};
  e.converged = true;
  e.objective = manufacturer_profit(model, p, menu, fr.prices);
  e.screening = screening_check(menu, p, fr.prices, model, opts.tolerance);
  return e;
}

double score_of(const MenuEvaluation& e, const SolveOptions& opts) {
  if (!e.converged) return kNegInf;
  if (opts.handling == ConstraintHandling::penalty)
    return e.objective - opts.penalty_weight * penalty(e.screening);
  return e.screening.feasible ? e.objective : kNegInf;
}

// Nested 1-D searches near the incumbent: w_H outside, the best w_L for each
// w_H inside. The w_L window moves with w_H so that it stays on a tilted
// binding constraint, which the 2-D lattice and polish step across.
template <class Score>
detail::ZoomPoint<2> refine_along_boundary(const std::array<double, 2>& lo,
                                           const std::array<double, 2>& hi,
                                           const SolveOptions& opts, Score&& score,
                                           const detail::ZoomPoint<2>& start) {
  constexpr int kPoints = 9;
  constexpr int kIterations = 20;
  const double offset = start.x[1] - start.x[0];
  auto window = [&](std::size_t d, double centre) {
    const double h = 0.25 * (hi[d] - lo[d]) / (opts.leader_grid - 1);
    return std::pair{std::max(lo[d], centre - h), std::min(hi[d], centre + h)};
  };
  const detail::ZoomSettings inner{kPoints, kPoints, kIterations, 1};
  const detail::ZoomSettings outer{kPoints, kPoints, kIterations,
                                   opts.threads};
  auto best_w_L = [&](double w_H) {
    const auto [l, h] = window(1, w_H + offset);
    if (l > h) return detail::ZoomPoint<1>{{l}, kNegInf};
    return detail::zoom_search<1>({l}, {h}, inner, [&](const std::array<double, 1>& y) {
      return score(std::array<double, 2>{w_H, y[0]});
    });
  };
  const auto [l, h] = window(0, start.x[0]);
  const auto top = detail::zoom_search<1>({l}, {h}, outer, [&](const std::array<double, 1>& x) {
    return best_w_L(x[0]).score;
  });
  if (!std::isfinite(top.score)) return start;
  const auto low = best_w_L(top.x[0]);
  return detail::ZoomPoint<2>{{top.x[0], low.x[0]}, low.score};
}

}  // namespace

Solution leader_optimize(ModelId model, const ModelParams& p, const SolveOptions& opts) {
  if (!is_competitive(model))
    throw StructuralError("leader_optimize applies to Models III-V; use centralized_optimize");
  if (auto bad = validate(opts); !bad.empty()) throw ConfigError(bad);
  if (auto bad = validate(p); !bad.empty()) throw ConfigError(bad);

  const Bounds b = resolve_bounds(p, opts);
  detail::ZoomSettings z{opts.leader_grid, opts.refine_grid, opts.refine_iterations,
                         opts.threads};

  auto score = [&](const std::array<double, 2>& w) {
    return score_of(evaluate_menu(model, p, opts, w[0], w[1]), opts);
  };
  const std::array<double, 2> lo{b.w_lo, b.w_lo}, hi{b.w_hi, b.w_hi};
  const auto best = detail::zoom_search<2>(lo, hi, z, score);
  if (!std::isfinite(best.score)) {
    // Report the initial-grid menu closest to feasibility.
    double best_min_slack = kNegInf;
    ScreeningConstraint worst = ScreeningConstraint::ir_L;
    for (const auto& w : detail::lattice<2>(lo, hi, opts.leader_grid)) {
      const MenuEvaluation e = evaluate_menu(model, p, opts, w[0], w[1]);
      if (e.converged && e.screening.min_slack() > best_min_slack) {
        best_min_slack = e.screening.min_slack();
        worst = e.screening.most_violated();
      }
    }
    throw InfeasibleError(std::string(to_string(worst)), best_min_slack);
  }

  // Only worth the cost when some screening constraint is nearly binding.
  constexpr double kNearlyBinding = 1e-3;
  auto chosen = best;
  if (evaluate_menu(model, p, opts, best.x[0], best.x[1]).screening.min_slack() <=
      kNearlyBinding) {
    const auto refined = refine_along_boundary(lo, hi, opts, score, best);
    if (detail::better(refined, best)) chosen = refined;
  }

  const FollowerResult fr =
      follower_equilibrium(ContractMenu{chosen.x[0], chosen.x[1], 0.0, 0.0}, p, model, opts);
  const ContractMenu menu{chosen.x[0], chosen.x[1], fr.tau_H, fr.tau_L};
  Solution s = evaluate_solution(model, p, menu, fr.prices, Provenance::oracle, opts.tolerance);
  s.notes.push_back("follower iterations " + std::to_string(fr.iterations));
  if (opts.compute_residuals) s.residuals = stage_residuals(s, p, opts);
  return s;
}

Solution oracle_solve(ModelId model, const ModelParams& p, const SolveOptions& opts) {
  return is_competitive(model) ? leader_optimize(model, p, opts)
                               : centralized_optimize(model, p, opts);
}

}  // namespace rsc
