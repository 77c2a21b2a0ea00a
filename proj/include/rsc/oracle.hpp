#pragma once

// Numerical oracle for the Stackelberg models.
//
// Decentralized models (III-V): the manufacturer picks (w_H, w_L); retailer 1
// picks (p1, tau_H, tau_L) to maximize its expected profit and retailer 2
// picks p2; retail prices form a Nash equilibrium found by damped
// best-response iteration. The leader problem is solved by a grid over
// (w_H, w_L) followed by zoom refinement, rejecting (or penalizing) menus that
// violate the screening constraints.
//
// Centralized models (I-II): the chain picks (p1, tau_H, tau_L) to maximize
// chain profit; buy-back prices are then the cheapest ones satisfying the
// screening constraints (a two-variable LP in the transfers).
//
// Retailer 1's best response is exact: for fixed p1 each tau has a projected
// closed-form optimum, and the resulting profile in p1 is piecewise quadratic,
// so every piece is maximized analytically.

#include <optional>
#include <string>
#include <vector>

#include "rsc/model.hpp"
#include "rsc/screening.hpp"
#include "rsc/solution.hpp"

namespace rsc {

enum class ConstraintHandling { reject_infeasible, penalty };

std::string_view to_string(ConstraintHandling h);
std::optional<ConstraintHandling> parse_constraint_handling(std::string_view s);

struct SolveOptions {
  int leader_grid = 41;        // points per axis of the initial (w_H, w_L) grid
  int refine_grid = 9;         // points per axis of each zoom step
  int refine_iterations = 60;  // zoom shrink steps; each shrinks the box by ~refine_grid/4
  int price_grid = 201;        // initial p1 grid, centralized models
  int tau_grid = 41;           // initial tau_L grid, centralized models
  double damping = 0.5;        // best-response damping in (0, 1]
  double tolerance = kDefaultFeasibilityTol;
  double fixed_point_tol = 1e-13;
  int max_iterations = 5000;
  std::optional<double> w_max;  // default 3 (c + c_d + c_r)
  std::optional<double> p_max;  // default a (1 + eps) / (1 - eps)
  ConstraintHandling handling = ConstraintHandling::reject_infeasible;
  double penalty_weight = 1e6;
  bool compute_residuals = true;
  unsigned threads = 0;  // 0: hardware concurrency
};

std::vector<std::string> validate(const SolveOptions& o);

struct Bounds {
  double w_lo = 0.0;
  double w_hi = 0.0;
  double p_lo = 0.0;
  double p_hi = 0.0;
};

Bounds resolve_bounds(const ModelParams& p, const SolveOptions& o);

/// Retailer 1's optimal recycling rate for one type facing buy-back price w:
/// (q1 (w - c) + k) / (2 beta) projected to [0, 1], with k only in Model V.
double tau_best_response(ModelId model, const ModelParams& p, double q1, double w,
                         double beta);

struct Retailer1Response {
  double p1 = 0.0;
  double tau_H = 0.0;
  double tau_L = 0.0;
  double profit = 0.0;
};

/// Exact maximizer of retailer 1's expected profit over
/// p1 in [p_lo, p_hi], tau in [0, 1]^2. p2 must be given iff the model is
/// competitive. Ties resolve to the smallest p1.
Retailer1Response retailer1_best_response(ModelId model, const ModelParams& p, double w_H,
                                          double w_L, std::optional<double> p2,
                                          const Bounds& b);

/// Retailer 1's expected profit at p1 with both taus at their best response.
double retailer1_profile(ModelId model, const ModelParams& p, double w_H, double w_L,
                         std::optional<double> p2, double p1);

/// Unconstrained maximizer of (p2 - p_m)(a - p2 + eps p1): (a + p_m + eps p1) / 2.
double retailer2_best_response(double p1, const ModelParams& p);

struct FollowerResult {
  PricePair prices;
  double tau_H = 0.0;
  double tau_L = 0.0;
  int iterations = 0;
  std::vector<double> gaps;  // |BR2(BR1(p2)) - p2| per iteration
};

/// Price equilibrium and tau choices for a given menu (only w_H, w_L are
/// read). For Models I-II this is retailer 1's best response alone. Throws
/// DivergenceError after opts.max_iterations.
FollowerResult follower_equilibrium(const ContractMenu& menu, const ModelParams& p,
                                    ModelId model, const SolveOptions& opts);

/// Leader (manufacturer) optimum for Models III-V. Throws InfeasibleError
/// when no menu on the grid satisfies the screening constraints.
Solution leader_optimize(ModelId model, const ModelParams& p, const SolveOptions& opts);

struct BuyBack {
  double w_H = 0.0;
  double w_L = 0.0;
  std::string binding;  // constraints tight at the LP vertex
};

/// Cheapest (w_H, w_L) in the w bounds meeting all four screening
/// constraints at (p1, tau_H, tau_L), minimizing the expected transfer to
/// retailer 1. Empty when infeasible. Models I-II only.
std::optional<BuyBack> minimal_buy_back(ModelId model, const ModelParams& p, double p1,
                                        double tau_H, double tau_L, const Bounds& b,
                                        double tol);

/// Chain optimum for Models I-II. Throws InfeasibleError when no p1 admits a
/// feasible menu.
Solution centralized_optimize(ModelId model, const ModelParams& p, const SolveOptions& opts);

/// centralized_optimize for I-II, leader_optimize for III-V.
Solution oracle_solve(ModelId model, const ModelParams& p, const SolveOptions& opts);

/// First-order residuals of every optimized stage at an oracle solution
/// (leader or chain stage, plus retailer stages where present): distance from
/// zero to the hull of finite-difference objective gradients sampled near the
/// solution plus the cone of active constraint gradients.
std::vector<StageResidual> stage_residuals(const Solution& s, const ModelParams& p,
                                           const SolveOptions& opts);

struct NashCheck {
  double max_gain_retailer1 = 0.0;  // best improvement over the equilibrium profit
  double max_gain_retailer2 = 0.0;
  int deviations = 0;               // per retailer
};

/// Unilateral price deviations on a +/- bracket (fraction of the equilibrium
/// price) around the equilibrium; retailer 1 re-optimizes its taus at each
/// deviating price.
NashCheck verify_nash(const Solution& s, const ModelParams& p, int deviations = 100,
                      double bracket = 0.1);

}  // namespace rsc
