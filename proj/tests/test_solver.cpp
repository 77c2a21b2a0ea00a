#include <cmath>

#include "doctest.h"
#include "rsc/errors.hpp"
#include "rsc/oracle.hpp"

using namespace rsc;

namespace {

SolveOptions quick() {
  SolveOptions o;
  o.leader_grid = 21;
  o.refine_iterations = 40;
  return o;
}

}  // namespace

TEST_CASE("retailer 2 best response") {
  ModelParams p;
  CHECK(retailer2_best_response(1.7, p) == doctest::Approx(2.49).epsilon(1e-12));
  for (double d : {-0.1, 0.1})
    CHECK(retailer2_profit(ModelId::III, p, PricePair{1.7, 2.49 + d}) <
          retailer2_profit(ModelId::III, p, PricePair{1.7, 2.49}));
  p.eps = 0.0;
  CHECK(retailer2_best_response(0.3, p) == retailer2_best_response(2.9, p));
}

TEST_CASE("recycling rate best response") {
  const ModelParams p;
  CHECK(tau_best_response(ModelId::III, p, 2.06, 4.5, 0.7) ==
        doctest::Approx(0.7357).epsilon(1e-4));
  CHECK(tau_best_response(ModelId::III, p, 2.06, p.c, 0.7) == 0.0);
  CHECK(tau_best_response(ModelId::III, p, 2.06, 9.0, 0.7) == 1.0);
  // Model V adds k to the marginal value.
  CHECK(tau_best_response(ModelId::V, p, 2.06, p.c, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("retailer 1 best response beats a dense grid") {
  const ModelParams p;
  const Bounds b = resolve_bounds(p, SolveOptions{});
  for (ModelId m : {ModelId::I, ModelId::III, ModelId::V}) {
    for (auto [wh, wl] : {std::pair{4.5, 3.3}, std::pair{6.0, 4.2}, std::pair{8.0, 1.0}}) {
      const std::optional<double> p2 =
          is_competitive(m) ? std::optional<double>(1.9) : std::nullopt;
      const auto r = retailer1_best_response(m, p, wh, wl, p2, b);
      const PricePair at{r.p1, p2};
      CHECK(r.profit == doctest::Approx(retailer1_profit(m, p, ContractMenu{wh, wl, r.tau_H,
                                                                            r.tau_L},
                                                         at)));
      double grid_best = -1e300;
      for (int i = 0; i <= 600; ++i)
        for (int j = 0; j <= 20; ++j)
          for (int k = 0; k <= 20; ++k) {
            const PricePair x{b.p_lo + (b.p_hi - b.p_lo) * i / 600.0, p2};
            grid_best = std::max(
                grid_best, retailer1_profit(m, p, ContractMenu{wh, wl, j / 20.0, k / 20.0}, x));
          }
      CHECK(r.profit >= grid_best - 1e-12);
    }
  }
}

TEST_CASE("undamped price iteration contracts at rate eps / 2") {
  const ModelParams p;
  SolveOptions o;
  o.damping = 1.0;
  const auto fr = follower_equilibrium(ContractMenu{4.5, 3.3, 0, 0}, p, ModelId::III, o);
  REQUIRE(fr.gaps.size() >= 3);
  for (std::size_t i = 1; i + 1 < fr.gaps.size(); ++i) {
    if (fr.gaps[i - 1] < 1e-12) break;
    CHECK(fr.gaps[i] <= (p.eps / 2.0) * fr.gaps[i - 1] * (1 + 1e-6) + 1e-15);
  }
}

TEST_CASE("follower divergence is reported with its trace") {
  const ModelParams p;
  SolveOptions o;
  o.max_iterations = 2;
  o.fixed_point_tol = 1e-300;
  try {
    follower_equilibrium(ContractMenu{4.5, 3.3, 0, 0}, p, ModelId::IV, o);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.trace().size() == 2);
  }
}

TEST_CASE("minimal buy-back meets every screening constraint") {
  const ModelParams p;
  const Bounds b = resolve_bounds(p, SolveOptions{});
  const auto bb = minimal_buy_back(ModelId::I, p, 1.6, 0.2, 0.4, b, 1e-9);
  REQUIRE(bb.has_value());
  const auto r = screening_check(ContractMenu{bb->w_H, bb->w_L, 0.2, 0.4}, p,
                                 PricePair{1.6, std::nullopt}, ModelId::I, 1e-9);
  CHECK(r.feasible);
  CHECK(bb->binding != "none");
}

TEST_CASE("single-type centralized optimum") {
  ModelParams p;
  p.mu = 1.0;
  const Solution s = centralized_optimize(ModelId::I, p, quick());
  // Recycling loses money per unit at the study costs, so tau = 0 and the
  // price maximizes (a - p1)(p1 - c_m).
  const double tau = std::clamp(
      (p.a - s.prices.p1) * (p.c_m - p.c_d - p.c_r - p.c) / (2 * p.beta_H), 0.0, 1.0);
  CHECK(s.menu.tau_H == doctest::Approx(tau).epsilon(1e-9));
  CHECK(s.prices.p1 == doctest::Approx((p.a + p.c_m) / 2).epsilon(1e-6));
  CHECK(s.screening.feasible);
}

TEST_CASE("large reservation profit is infeasible") {
  ModelParams p;
  p.pi_R0 = 1e6;
  CHECK_THROWS_AS(centralized_optimize(ModelId::II, p, quick()), InfeasibleError);
  CHECK_THROWS_AS(leader_optimize(ModelId::III, p, quick()), InfeasibleError);
}

TEST_CASE("structural misuse") {
  const ModelParams p;
  CHECK_THROWS_AS(leader_optimize(ModelId::I, p, quick()), StructuralError);
  CHECK_THROWS_AS(centralized_optimize(ModelId::IV, p, quick()), StructuralError);
  SolveOptions bad;
  bad.damping = 0.0;
  bad.leader_grid = 1;
  try {
    oracle_solve(ModelId::III, p, bad);
    FAIL("expected config error");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 2);
  }
}

TEST_CASE("leader solution is a verified equilibrium") {
  const ModelParams p;
  for (ModelId m : {ModelId::III, ModelId::IV, ModelId::V}) {
    const Solution s = leader_optimize(m, p, quick());
    CHECK(s.screening.min_slack() >= -1e-6);
    const NashCheck n = verify_nash(s, p);
    CHECK(n.max_gain_retailer1 <= 1e-6);
    CHECK(n.max_gain_retailer2 <= 1e-6);
    for (const auto& r : s.residuals) {
      INFO(to_string(m), " ", r.stage, " ", r.active, " ", r.gradient_norm);
      CHECK(r.scaled < 1e-4);
    }
  }
}
