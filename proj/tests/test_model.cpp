#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "rsc/errors.hpp"
#include "rsc/model.hpp"

using namespace rsc;

namespace {

ModelParams single_type() {
  ModelParams p;
  p.mu = 1.0;
  return p;
}

const ContractMenu kMenu{4.5, 3.3, 0.5, 0.4};

PricePair prices_for(ModelId m) {
  return is_competitive(m) ? PricePair{1.7, 1.9} : PricePair{1.7, std::nullopt};
}

}  // namespace

TEST_CASE("model ids parse and print") {
  CHECK(parse_model_id("IV") == ModelId::IV);
  CHECK(parse_model_id("3") == ModelId::III);
  CHECK_FALSE(parse_model_id("VI").has_value());
  CHECK(to_string(ModelId::V) == "V");
}

TEST_CASE("default parameters are valid") {
  CHECK(validate(ModelParams{}).empty());
  ModelParams bad;
  bad.eps = 1.2;
  bad.beta_H = -1.0;
  CHECK(validate(bad).size() == 2);
}

TEST_CASE("demand") {
  ModelParams p;
  const Demand d = demand(p, PricePair{1.7, 1.9}, ModelId::III);
  CHECK(d.q1 == doctest::Approx(2.06).epsilon(1e-12));
  CHECK(d.q2 == doctest::Approx(1.78).epsilon(1e-12));
  CHECK(d.Q == doctest::Approx(3.84).epsilon(1e-12));
  CHECK_FALSE(d.negative);

  CHECK(demand(p, PricePair{3.0, std::nullopt}, ModelId::I).q1 == 0.0);
  p.eps = 0.0;
  const Demand s = demand(p, PricePair{1.2, 1.2}, ModelId::IV);
  CHECK(s.q1 == s.q2);
  CHECK(s.q1 == doctest::Approx(1.8));

  CHECK_THROWS_AS(demand(p, PricePair{1.7, std::nullopt}, ModelId::III), StructuralError);
  CHECK_THROWS_AS(demand(p, PricePair{1.7, 1.9}, ModelId::I), StructuralError);
}

TEST_CASE("transfers") {
  ModelParams p;
  CHECK(emission_transfer(p, 3.84) == doctest::Approx(-6.468).epsilon(1e-12));
  CHECK(emission_transfer(p, p.e_0 / p.e_m) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(recycling_transfer(p, 0.56) == doctest::Approx(-0.48).epsilon(1e-12));
  CHECK(recycling_transfer(p, p.tau_0) == 0.0);
  CHECK(retailer2_penalty(p) == doctest::Approx(-1.6));
  p.f = 0.0;
  CHECK(emission_transfer(p, 7.0) == 0.0);
}

TEST_CASE("manufacturer profit") {
  const ModelParams p = single_type();
  const ContractItem item{4.5, 0.5};
  CHECK(manufacturer_unit_margin(p, item) == doctest::Approx(-4.75).epsilon(1e-12));
  const ContractMenu menu{4.5, 0.0, 0.5, 0.0};
  CHECK(manufacturer_profit(ModelId::I, p, menu, PricePair{1.7, std::nullopt}) ==
        doctest::Approx(-6.175).epsilon(1e-12));

  const ContractMenu none{4.5, 3.0, 0.0, 0.0};
  const ModelParams d;
  CHECK(manufacturer_profit(ModelId::I, d, none, PricePair{1.7, std::nullopt}) ==
        doctest::Approx(1.3 * (d.p_m - d.c_m)));
}

TEST_CASE("retailer profits") {
  const ModelParams p = single_type();
  const ContractMenu menu{4.5, 0.0, 0.5, 0.0};
  CHECK(retailer1_profit(ModelId::III, p, menu, PricePair{1.7, 1.9}) ==
        doctest::Approx(1.164).epsilon(1e-12));
  CHECK(retailer1_profit(ModelId::III, p, ContractMenu{4.5, 4.5, 0.0, 0.0},
                         PricePair{p.p_m, 1.9}) == doctest::Approx(0.0));

  CHECK(retailer2_profit(ModelId::III, p, PricePair{1.7, 1.9}) ==
        doctest::Approx(1.068).epsilon(1e-12));
  CHECK(retailer2_profit(ModelId::V, p, PricePair{1.7, 1.9}) ==
        doctest::Approx(-0.532).epsilon(1e-12));
  CHECK(retailer2_profit(ModelId::IV, p, PricePair{1.7, p.p_m}) == 0.0);
  CHECK_THROWS_AS(retailer2_profit(ModelId::II, p, PricePair{1.7, std::nullopt}),
                  StructuralError);
}

TEST_CASE("reductions at zero mechanism strength") {
  ModelParams p;
  p.f = 0.0;
  const PricePair c{1.7, std::nullopt}, d{1.7, 1.9};
  CHECK(manufacturer_profit(ModelId::II, p, kMenu, c) ==
        manufacturer_profit(ModelId::I, p, kMenu, c));
  CHECK(chain_profit(ModelId::II, p, kMenu, c) == chain_profit(ModelId::I, p, kMenu, c));
  CHECK(manufacturer_profit(ModelId::IV, p, kMenu, d) ==
        manufacturer_profit(ModelId::III, p, kMenu, d));
  p.k = 0.0;
  CHECK(retailer1_profit(ModelId::V, p, kMenu, d) ==
        retailer1_profit(ModelId::IV, p, kMenu, d));
  CHECK(retailer2_profit(ModelId::V, p, d) == retailer2_profit(ModelId::IV, p, d));
}

TEST_CASE("accounting identity and transfer conservation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(0.0, 8.0), t(0.0, 1.0), pr(0.5, 2.9);
  for (int i = 0; i < 200; ++i) {
    const ContractMenu menu{w(rng), w(rng), t(rng), t(rng)};
    for (ModelId m : kAllModels) {
      ModelParams p;
      const PricePair x = is_competitive(m) ? PricePair{pr(rng), pr(rng)}
                                            : PricePair{pr(rng), std::nullopt};
      double members = manufacturer_profit(m, p, menu, x) + retailer1_profit(m, p, menu, x);
      if (is_competitive(m)) members += retailer2_profit(m, p, x);
      CHECK(std::abs(chain_profit(m, p, menu, x) - members) < 1e-9);

      if (has_emission_transfer(m)) {
        ModelParams p0 = p;
        p0.f = 0.0;
        const double diff =
            manufacturer_profit(m, p, menu, x) - manufacturer_profit(m, p0, menu, x);
        const double M = emission_transfer(p, manufacturer_quantity(p, x, m));
        CHECK(std::abs(diff - M) < 1e-12);
      }
    }
  }
}

TEST_CASE("buy-back neutrality in centralized models") {
  ModelParams p;
  for (ModelId m : {ModelId::I, ModelId::II}) {
    const PricePair x{1.4, std::nullopt};
    const double base = chain_profit(m, p, ContractMenu{0.0, 0.0, 0.3, 0.6}, x);
    for (double wh : {1.0, 4.5, 9.0})
      for (double wl : {0.5, 3.3})
        CHECK(chain_profit(m, p, ContractMenu{wh, wl, 0.3, 0.6}, x) ==
              doctest::Approx(base).epsilon(1e-12));
    // Per-unit chain recycling margin is -(c_d + c_r - c_m + c) tau.
    const double direct = (p.a - 1.4) * (1.4 - p.c_m) +
                          p.mu * ((p.a - 1.4) * -(p.c_d + p.c_r - p.c_m + p.c) * 0.3 -
                                  p.beta_H * 0.09) +
                          (1 - p.mu) * ((p.a - 1.4) * -(p.c_d + p.c_r - p.c_m + p.c) * 0.6 -
                                        p.beta_L * 0.36);
    if (m == ModelId::I) CHECK(base == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("profits are linear in each cost parameter") {
  // Central second differences vanish for affine functions.
  const ContractMenu menu{3.7, 2.1, 0.45, 0.3};
  for (ModelId m : kAllModels) {
    const PricePair x = prices_for(m);
    for (double ModelParams::*field :
         {&ModelParams::c, &ModelParams::c_d, &ModelParams::c_r, &ModelParams::c_m,
          &ModelParams::beta_H, &ModelParams::beta_L, &ModelParams::f, &ModelParams::k}) {
      auto at = [&](double v) {
        ModelParams p;
        p.*field = v;
        return chain_profit(m, p, menu, x);
      };
      const ModelParams base;
      const double v = base.*field, h = 0.25;
      CHECK(std::abs(at(v + h) - 2 * at(v) + at(v - h)) < 1e-10);
    }
  }
}

TEST_CASE("evaluators are pure") {
  const ModelParams p;
  for (ModelId m : kAllModels) {
    const PricePair x = prices_for(m);
    const double a = chain_profit(m, p, kMenu, x);
    const double b = chain_profit(m, p, kMenu, x);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }
}

TEST_CASE("diagnostics flag out-of-range values") {
  const ModelParams p;
  const auto codes = diagnose(ModelId::III, p, ContractMenu{4.5, 3.3, 1.4, 0.5},
                              PricePair{1.7, 4.5});
  auto has = [&](const char* s) {
    return std::find(codes.begin(), codes.end(), s) != codes.end();
  };
  CHECK(has("tau_H_out_of_range"));
  CHECK(has("negative_demand_q2"));
  CHECK(has("negative_manufacturer_margin_H"));
  CHECK_FALSE(has("tau_L_out_of_range"));
}
