#include <algorithm>
#include <cmath>
#include <limits>

#include "rsc/errors.hpp"
#include "rsc/oracle.hpp"

namespace rsc {

std::string_view to_string(ConstraintHandling h) {
  return h == ConstraintHandling::reject_infeasible ? "reject_infeasible" : "penalty";
}

std::optional<ConstraintHandling> parse_constraint_handling(std::string_view s) {
  if (s == "reject_infeasible") return ConstraintHandling::reject_infeasible;
  if (s == "penalty") return ConstraintHandling::penalty;
  return std::nullopt;
}

std::vector<std::string> validate(const SolveOptions& o) {
  std::vector<std::string> bad;
  if (o.leader_grid < 2) bad.push_back("leader_grid: must be >= 2");
  if (o.refine_grid < 3) bad.push_back("refine_grid: must be >= 3");
  if (o.refine_iterations < 0) bad.push_back("refine_iterations: must be >= 0");
  if (o.price_grid < 2) bad.push_back("price_grid: must be >= 2");
  if (o.tau_grid < 2) bad.push_back("tau_grid: must be >= 2");
  if (!(o.damping > 0.0 && o.damping <= 1.0)) bad.push_back("damping: must lie in (0, 1]");
  if (!(o.tolerance > 0.0)) bad.push_back("tolerance: must be > 0");
  if (!(o.fixed_point_tol > 0.0)) bad.push_back("fixed_point_tol: must be > 0");
  if (o.max_iterations < 1) bad.push_back("max_iterations: must be >= 1");
  if (o.w_max && !(*o.w_max > 0.0)) bad.push_back("w_max: bounds must be nonempty (> 0)");
  if (o.p_max && !(*o.p_max > 0.0)) bad.push_back("p_max: bounds must be nonempty (> 0)");
  if (!(o.penalty_weight > 0.0)) bad.push_back("penalty_weight: must be > 0");
  return bad;
}

Bounds resolve_bounds(const ModelParams& p, const SolveOptions& o) {
  Bounds b;
  b.w_lo = 0.0;
  b.w_hi = o.w_max.value_or(3.0 * (p.c + p.c_d + p.c_r));
  b.p_lo = 0.0;
  b.p_hi = o.p_max.value_or(p.a * (1.0 + p.eps) / (1.0 - p.eps));
  return b;
}

double tau_best_response(ModelId model, const ModelParams& p, double q1, double w,
                         double beta) {
  const double k = has_recycling_transfer(model) ? p.k : 0.0;
  return std::clamp((q1 * (w - p.c) + k) / (2.0 * beta), 0.0, 1.0);
}

namespace {

struct Profile {
  ModelId model;
  const ModelParams& p;
  double w_H, w_L;
  double A;  // q1 = A - p1
  double k;  // recycling strength in Model V, 0 otherwise
  std::array<TypeProfile, 2> types;

  Profile(ModelId m, const ModelParams& params, double wh, double wl,
          std::optional<double> p2)
      : model(m),
        p(params),
        w_H(wh),
        w_L(wl),
        A(params.a + (is_competitive(m) ? params.eps * p2.value() : 0.0)),
        k(has_recycling_transfer(m) ? params.k : 0.0),
        types(type_profiles(params)) {}

  double w(RetailerType t) const { return t == RetailerType::H ? w_H : w_L; }

  Retailer1Response at(double p1) const {
    const double q1 = A - p1;
    Retailer1Response r;
    r.p1 = p1;
    r.profit = q1 * (p1 - p.p_m);
    for (const auto& t : types) {
      const double tau = tau_best_response(model, p, q1, w(t.label), t.beta);
      (t.label == RetailerType::H ? r.tau_H : r.tau_L) = tau;
      double branch = q1 * tau * (w(t.label) - p.c) - t.beta * tau * tau;
      if (has_recycling_transfer(model)) branch += recycling_transfer(p, tau);
      r.profit += t.weight * branch;
    }
    return r;
  }
};

}  // namespace

double retailer1_profile(ModelId model, const ModelParams& p, double w_H, double w_L,
                         std::optional<double> p2, double p1) {
  return Profile(model, p, w_H, w_L, p2).at(p1).profit;
}

Retailer1Response retailer1_best_response(ModelId model, const ModelParams& p, double w_H,
                                          double w_L, std::optional<double> p2,
                                          const Bounds& b) {
  if (is_competitive(model) != p2.has_value())
    throw StructuralError("retailer 1 best response: p2 must be given iff model is competitive");
  const Profile prof(model, p, w_H, w_L, p2);
  // Prices beyond the choke price A would mean negative demand.
  const double p_hi = std::max(b.p_lo, std::min(b.p_hi, prof.A));

  // Breakpoints where a tau leaves (0, 1): q1 (w - c) + k = 0 or = 2 beta.
  std::vector<double> knots{b.p_lo, p_hi};
  for (const auto& t : prof.types) {
    const double d = prof.w(t.label) - p.c;
    if (d == 0.0) continue;
    for (double target : {0.0, 2.0 * t.beta}) {
      const double x = prof.A - (target - prof.k) / d;
      if (x > b.p_lo && x < p_hi) knots.push_back(x);
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<double> candidates = knots;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i], hi = knots[i + 1];
    const double mid = 0.5 * (lo + hi);
    const double q_mid = prof.A - mid;
    // On this piece: g'(p1) = C - (2 - s) p1.
    double s = 0.0;
    double C = prof.A + p.p_m;
    for (const auto& t : prof.types) {
      const double d = prof.w(t.label) - p.c;
      const double raw = (q_mid * d + prof.k) / (2.0 * t.beta);
      if (raw >= 1.0) {
        C -= t.weight * d;
      } else if (raw > 0.0) {
        s += t.weight * d * d / (2.0 * t.beta);
        C -= t.weight * d * (prof.A * d + prof.k) / (2.0 * t.beta);
      }
    }
    const double curvature = 2.0 - s;
    if (curvature > 0.0) {
      const double x = C / curvature;
      if (x > lo && x < hi) candidates.push_back(x);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  Retailer1Response best = prof.at(candidates.front());
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const Retailer1Response r = prof.at(candidates[i]);
    if (r.profit > best.profit) best = r;
  }
  return best;
}

double retailer2_best_response(double p1, const ModelParams& p) {
  return 0.5 * (p.a + p.p_m + p.eps * p1);
}

FollowerResult follower_equilibrium(const ContractMenu& menu, const ModelParams& p,
                                    ModelId model, const SolveOptions& opts) {
  const Bounds b = resolve_bounds(p, opts);
  FollowerResult out;
  if (!is_competitive(model)) {
    const auto r = retailer1_best_response(model, p, menu.w_H, menu.w_L, std::nullopt, b);
    out.prices = PricePair{r.p1, std::nullopt};
    out.tau_H = r.tau_H;
    out.tau_L = r.tau_L;
    return out;
  }

  auto br2 = [&](double p1) {
    const double choke = std::max(b.p_lo, std::min(b.p_hi, p.a + p.eps * p1));
    return std::clamp(retailer2_best_response(p1, p), b.p_lo, choke);
  };
  // BR2 maps into [p_lo, p_hi], so the gap BR2(BR1(p2)) - p2 is >= 0 at p_lo
  // and <= 0 at p_hi. Damped steps that leave the bracket, or that stall,
  // are replaced by a secant step through the last two iterates, or by
  // bisection when that also leaves the bracket.
  double lo = b.p_lo, hi = b.p_hi;
  double p2 = std::clamp(p.p2.value_or((p.a + p.p_m) / (2.0 - p.eps)), b.p_lo, b.p_hi);
  double prev_gap = std::numeric_limits<double>::infinity();
  double prev_p2 = std::numeric_limits<double>::quiet_NaN(), prev_step = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Retailer1Response r1 = retailer1_best_response(model, p, menu.w_H, menu.w_L, p2, b);
    const double step = br2(r1.p1) - p2;
    const double gap = std::abs(step);
    out.gaps.push_back(gap);
    if (gap <= opts.fixed_point_tol * std::max(1.0, std::abs(p2))) {
      out.prices = PricePair{r1.p1, p2};
      out.tau_H = r1.tau_H;
      out.tau_L = r1.tau_L;
      out.iterations = it;
      return out;
    }
    (step > 0.0 ? lo : hi) = p2;
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(p2))) {
      throw DivergenceError("no pure price equilibrium: best responses jump across p2 = " +
                                std::to_string(p2),
                            out.gaps);
    }
    double next = p2 + opts.damping * step;
    if (!(next > lo && next < hi) || gap > 0.5 * prev_gap) {
      next = 0.5 * (lo + hi);
      if (std::isfinite(prev_p2) && step != prev_step) {
        const double secant = p2 - step * (p2 - prev_p2) / (step - prev_step);
        if (secant > lo && secant < hi) next = secant;
      }
    }
    prev_p2 = p2;
    prev_step = step;
    prev_gap = gap;
    p2 = next;
  }
  throw DivergenceError("price best-response iteration did not converge in " +
                            std::to_string(opts.max_iterations) + " iterations",
                        out.gaps);
}

}  // namespace rsc
