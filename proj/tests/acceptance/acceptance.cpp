// Acceptance checks. Run with a criterion number (1-7) or with no argument
// for all of them; prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "rsc/analysis.hpp"
#include "rsc/closed_form.hpp"
#include "rsc/errors.hpp"
#include "rsc/oracle.hpp"

using namespace rsc;

namespace {

constexpr double kTol = 1e-6;

struct Outcome {
  bool pass = false;
  std::string summary;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SolveOptions no_residuals() {
  SolveOptions o;
  o.compute_residuals = false;
  return o;
}

// Decisions and profits compared by the reduction checks.
std::vector<std::pair<std::string, double>> fields(const Solution& s) {
  std::vector<std::pair<std::string, double>> v = {
      {"w_H", s.menu.w_H},     {"w_L", s.menu.w_L},
      {"tau_H", s.menu.tau_H}, {"tau_L", s.menu.tau_L},
      {"p1", s.prices.p1},     {"manufacturer", s.profits.manufacturer},
      {"retailer1", s.profits.retailer1}, {"chain", s.profits.chain}};
  if (s.prices.p2) {
    v.push_back({"p2", *s.prices.p2});
    v.push_back({"retailer2", s.profits.retailer2});
  }
  return v;
}

// Largest absolute difference over all shared fields.
double max_difference(const Solution& a, const Solution& b) {
  const auto fa = fields(a), fb = fields(b);
  double m = 0.0;
  for (std::size_t i = 0; i < fa.size() && i < fb.size(); ++i) {
    const double d = std::abs(fa[i].second - fb[i].second);
    m = std::isnan(d) ? std::numeric_limits<double>::infinity() : std::max(m, d);
  }
  return m;
}

struct Reduction {
  const char* name;
  ModelId reduced;
  ModelId base;
  bool zero_f;  // else zero k
};

const Reduction kReductions[] = {
    {"II(f=0) vs I", ModelId::II, ModelId::I, true},
    {"IV(f=0) vs III", ModelId::IV, ModelId::III, true},
    {"V(k=0) vs IV", ModelId::V, ModelId::IV, false},
};

ModelParams reduce(ModelParams p, const Reduction& r) {
  if (r.zero_f)
    p.f = 0.0;
  else
    p.k = 0.0;
  return p;
}

// Random parameter sets on which the oracle solves every listed model.
struct Draws {
  std::vector<ModelParams> params;
  int rejected = 0;
};

Draws oracle_feasible_draws(std::size_t n, std::uint64_t seed,
                            const std::function<bool(const ModelParams&)>& solves) {
  Draws d;
  std::mt19937_64 rng(seed);
  while (d.params.size() < n) {
    const ModelParams p = random_params(rng);
    if (validate(p).empty() && solves(p))
      d.params.push_back(p);
    else
      ++d.rejected;
    if (d.rejected > 100000) break;
  }
  return d;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const SolveOptions opts = no_residuals();
  std::vector<std::array<Solution, 6>> solved;
  auto solves = [&](const ModelParams& p) {
    try {
      std::array<Solution, 6> s;
      for (std::size_t i = 0; i < 3; ++i) {
        s[2 * i] = oracle_solve(kReductions[i].reduced, reduce(p, kReductions[i]), opts);
        s[2 * i + 1] = oracle_solve(kReductions[i].base, p, opts);
      }
      solved.push_back(s);
      return true;
    } catch (const std::exception&) {
      return false;
    }
  };
  const Draws d = oracle_feasible_draws(50, kDefaultSeed, solves);

  int oracle_ok = 0, cf_ok = 0, cf_singular = 0, total = 0;
  double oracle_worst = 0.0;
  std::map<std::string, int> cf_fail;
  for (std::size_t i = 0; i < d.params.size(); ++i) {
    for (std::size_t r = 0; r < 3; ++r) {
      ++total;
      const double od = max_difference(solved[i][2 * r], solved[i][2 * r + 1]);
      oracle_worst = std::max(oracle_worst, od);
      oracle_ok += od <= kTol;
      try {
        const Solution a = closed_form(kReductions[r].reduced, reduce(d.params[i], kReductions[r]));
        const Solution b = closed_form(kReductions[r].base, d.params[i]);
        const auto fa = fields(a), fb = fields(b);
        bool ok = true;
        for (std::size_t j = 0; j < fa.size(); ++j)
          if (!(std::abs(fa[j].second - fb[j].second) <= kTol)) {
            ok = false;
            ++cf_fail[std::string(kReductions[r].name) + " " + fa[j].first];
          }
        cf_ok += ok;
      } catch (const SingularError&) {
        ++cf_singular;
        ++cf_fail[std::string(kReductions[r].name) + " singular"];
      }
    }
  }
  const double secs = seconds_since(t0);
  for (const auto& [k, v] : cf_fail) std::printf("  closed-form mismatch %-28s %d/50 draws\n", k.c_str(), v);
  std::printf("  oracle worst difference %.3g over %d comparisons; %d draws rejected\n",
              oracle_worst, total, d.rejected);
  const bool pass = d.params.size() == 50 && oracle_ok == total && cf_ok == total && secs < 30.0;
  return {pass, "reduction identities on " + std::to_string(d.params.size()) +
                    " draws: oracle " + std::to_string(oracle_ok) + "/" + std::to_string(total) +
                    ", closed form " + std::to_string(cf_ok) + "/" + std::to_string(total) +
                    " (" + std::to_string(cf_singular) + " singular), " + fmt("%.1f s", secs)};
}

// The study point and 50 random draws with every model solved.
struct OracleSet {
  std::vector<std::pair<ModelParams, Solution>> solutions;
  int rejected = 0;
};

OracleSet oracle_set(const SolveOptions& opts, std::size_t draws) {
  OracleSet out;
  for (ModelId m : kAllModels) out.solutions.emplace_back(ModelParams{}, oracle_solve(m, ModelParams{}, opts));
  auto solves = [&](const ModelParams& p) {
    std::vector<std::pair<ModelParams, Solution>> s;
    try {
      for (ModelId m : kAllModels) s.emplace_back(p, oracle_solve(m, p, opts));
    } catch (const std::exception&) {
      return false;
    }
    out.solutions.insert(out.solutions.end(), s.begin(), s.end());
    return true;
  };
  out.rejected = oracle_feasible_draws(draws, kDefaultSeed + 1, solves).rejected;
  return out;
}

Outcome criterion2() {
  const OracleSet set = oracle_set(no_residuals(), 50);
  int ok = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [p, s] : set.solutions) {
    const ScreeningReport r = screening_check(s.menu, p, s.prices, s.model, kTol);
    worst = std::min(worst, r.min_slack());
    ok += r.min_slack() >= -kTol;
  }
  const int n = static_cast<int>(set.solutions.size());
  return {ok == n && n == 5 * 51,
          "screening slacks on " + std::to_string(n) + " oracle solutions: " + std::to_string(ok) +
              " feasible, smallest slack " + fmt("%.3g", worst)};
}

Outcome criterion3() {
  const OracleSet set = oracle_set(SolveOptions{}, 50);
  int nash_ok = 0, stat_ok = 0, nash_n = 0;
  double worst_gain = -std::numeric_limits<double>::infinity(), worst_scaled = 0.0;
  for (const auto& [p, s] : set.solutions) {
    if (is_competitive(s.model)) {
      const NashCheck n = verify_nash(s, p, 100, 0.1);
      const double g = std::max(n.max_gain_retailer1, n.max_gain_retailer2);
      worst_gain = std::max(worst_gain, g);
      nash_ok += g <= kTol;
      ++nash_n;
    }
    bool ok = !s.residuals.empty();
    for (const auto& r : s.residuals) {
      const double v = std::isfinite(r.scaled) ? r.scaled : std::numeric_limits<double>::infinity();
      worst_scaled = std::max(worst_scaled, v);
      if (!(v < 1e-4)) {
        ok = false;
        std::printf("  model %s stage %s scaled residual %.3g (active %s)\n",
                    std::string(to_string(s.model)).c_str(), r.stage.c_str(), r.scaled,
                    r.active.c_str());
      }
    }
    stat_ok += ok;
  }
  const int n = static_cast<int>(set.solutions.size());
  return {nash_ok == nash_n && stat_ok == n,
          "Nash deviations " + std::to_string(nash_ok) + "/" + std::to_string(nash_n) +
              " (largest gain " + fmt("%.3g", worst_gain) + "), stationarity " +
              std::to_string(stat_ok) + "/" + std::to_string(n) + " (largest scaled residual " +
              fmt("%.3g", worst_scaled) + ")"};
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p;
  const std::vector<double> f{3, 5, 7, 9}, k{2, 4, 6, 8};
  bool pass = true;
  std::string summary;
  for (Provenance src : {Provenance::closed_form, Provenance::oracle}) {
    const SweepTable t = sweep(p, f, k, src, SweepGrid::paired, no_residuals());
    int passed = 0, checked = 0;
    for (const auto& c : ordering_checks(t)) {
      // Closed-form rows are judged only where every value is finite.
      if (src == Provenance::closed_form) {
        bool singular = false;
        for (const auto& r : t.rows) singular = singular || r.status != "ok";
        if (singular) continue;
      }
      ++checked;
      passed += c.pass;
      if (!c.pass) std::printf("  %s ordering fails: %s (%s)\n", std::string(to_string(src)).c_str(),
                               c.name.c_str(), c.detail.c_str());
    }
    double worst = 0.0;
    for (const auto& d : reference_deviations(t)) worst = std::max(worst, std::abs(d.deviation));
    std::printf("  %s largest deviation from the published table %.4g\n",
                std::string(to_string(src)).c_str(), worst);
    pass = pass && passed == checked;
    summary += std::string(to_string(src)) + " " + std::to_string(passed) + "/" +
               std::to_string(checked) + " orderings; ";
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 60.0;
  return {pass, "table orderings: " + summary + fmt("%.1f s", secs)};
}

bool fully_populated(const PropositionReport& r) {
  if (r.claims.empty() || r.verdict == Verdict::singular) return false;
  for (const auto& c : r.claims) {
    for (const auto& a : c.antecedents)
      if (!std::isfinite(a.lhs) || !std::isfinite(a.rhs)) return false;
    if (!c.conclusion.singular.empty() || !std::isfinite(c.conclusion.lhs)) return false;
  }
  return true;
}

Outcome criterion5() {
  auto accept = [](const ModelParams& p) {
    if (!(p.f * p.e_m > 0.0)) return false;
    for (ModelId m : {ModelId::I, ModelId::II}) {
      const ClosedFormSet s = closed_form_values(m, p);
      if (!s.get("tau_H").ok() || !s.get("tau_L").ok()) return false;
    }
    return true;
  };
  int holds = 0;
  const auto draws = feasible_draws(100, kDefaultSeed, accept);
  for (const auto& p : draws) holds += check_proposition(2, p, Provenance::closed_form).verdict == Verdict::holds;

  const ModelParams p;
  int populated = 0, reports = 0;
  for (int n : {1, 4, 5, 6, 7, 8}) {
    for (Provenance src : {Provenance::closed_form, Provenance::oracle}) {
      const PropositionReport r = check_proposition(n, p, src, no_residuals());
      ++reports;
      populated += fully_populated(r);
      std::printf("  proposition %d %-11s %s\n", n, std::string(to_string(src)).c_str(),
                  std::string(to_string(r.verdict)).c_str());
    }
  }
  const PropositionReport r1 = check_proposition(1, p, Provenance::closed_form);
  const double thr = r1.claims.front().antecedents.front().rhs;
  const bool pass = holds == 100 && populated == reports && std::abs(thr - 0.130435) <= 1e-6;
  return {pass, "second proposition holds on " + std::to_string(holds) + "/100 draws; " +
                    std::to_string(populated) + "/" + std::to_string(reports) +
                    " reports populated; threshold " + fmt("%.6f", thr)};
}

// Brute-force check of the single-type problem. Returns a description and
// whether the oracle matched.
struct BruteResult {
  double oracle = 0.0;
  double grid = 0.0;
  double cell = 0.0;  // largest objective change to a feasible grid neighbour
  bool pass = false;
};

template <class Objective>
BruteResult brute_2d(double xlo, double xhi, double ylo, double yhi, int n, Objective&& obj,
                     double oracle) {
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };
  int bi = -1, bj = -1;
  for (int i = 0; i < n; ++i) {
    const double x = xlo + (xhi - xlo) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double y = ylo + (yhi - ylo) * j / (n - 1);
      at(i, j) = obj(x, y);
      if (bi < 0 || at(i, j) > at(bi, bj)) {
        bi = i;
        bj = j;
      }
    }
  }
  BruteResult r;
  r.oracle = oracle;
  r.grid = at(bi, bj);
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      const int i = bi + di, j = bj + dj;
      if (i < 0 || j < 0 || i >= n || j >= n) continue;
      if (std::isfinite(at(i, j))) r.cell = std::max(r.cell, std::abs(at(bi, bj) - at(i, j)));
    }
  r.pass = std::isfinite(r.grid) &&
           std::abs(r.oracle - r.grid) <= r.cell + 1e-9 * std::max(1.0, std::abs(r.grid));
  return r;
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kN = 500;
  ModelParams study;
  study.mu = 1.0;
  ModelParams recycling = study;  // a point where recycling pays
  recycling.a = 6;
  recycling.c = 1;
  recycling.c_d = 0.5;
  recycling.c_r = 0.5;
  recycling.c_m = 4;
  recycling.p_m = 3;
  recycling.pi_R0 = 0.1;

  bool pass = true;
  int cases = 0;
  for (const auto& [label, p] : {std::pair{"study point", study}, std::pair{"recycling point", recycling}}) {
    const SolveOptions opts = no_residuals();
    const Bounds b = resolve_bounds(p, opts);

    // Model I: one contract (w, tau) and the price; w is any feasible buy-back
    // price, which leaves the chain profit unchanged.
    const Solution s1 = oracle_solve(ModelId::I, p, opts);
    const double p_hi = std::min(b.p_hi, p.a);
    auto chain = [&](double p1, double tau) {
      if (!minimal_buy_back(ModelId::I, p, p1, tau, tau, b, opts.tolerance))
        return -std::numeric_limits<double>::infinity();
      return chain_profit(ModelId::I, p, ContractMenu{p.c, p.c, tau, tau}, PricePair{p1, std::nullopt});
    };
    const BruteResult r1 = brute_2d(b.p_lo, p_hi, 0.0, 1.0, kN, chain, s1.profits.chain);

    // Model III: the leader's (w_H, w_L) with the followers' equilibrium.
    const Solution s3 = oracle_solve(ModelId::III, p, opts);
    auto leader = [&](double wH, double wL) {
      try {
        const FollowerResult fr = follower_equilibrium(ContractMenu{wH, wL, 0, 0}, p, ModelId::III, opts);
        const ContractMenu m{wH, wL, fr.tau_H, fr.tau_L};
        if (!screening_check(m, p, fr.prices, ModelId::III, opts.tolerance).feasible)
          return -std::numeric_limits<double>::infinity();
        return manufacturer_profit(ModelId::III, p, m, fr.prices);
      } catch (const DivergenceError&) {
        return -std::numeric_limits<double>::infinity();
      }
    };
    const BruteResult r3 = brute_2d(b.w_lo, b.w_hi, b.w_lo, b.w_hi, kN, leader, s3.profits.manufacturer);

    for (const auto& [model, r] : {std::pair{"I", r1}, std::pair{"III", r3}}) {
      std::printf("  %s Model %-3s oracle %.10g grid %.10g cell %.3g %s\n", label, model, r.oracle,
                  r.grid, r.cell, r.pass ? "ok" : "MISMATCH");
      pass = pass && r.pass;
      ++cases;
    }
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 120.0;
  return {pass, "single-type oracle against a 500-point-per-axis grid on " + std::to_string(cases) +
                    " cases, " + fmt("%.1f s", secs)};
}

std::map<std::string, std::string> read_csvs(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream is(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    out[e.path().filename().string()] = ss.str();
  }
  return out;
}

Outcome criterion7() {
  const auto dir = std::filesystem::temp_directory_path() / "rsc_acceptance_sweep";
  std::filesystem::remove_all(dir);
  nlohmann::json j = nlohmann::json::object();
  j["output"]["dir"] = dir.string();
  const cli::RunConfig c = cli::load_config(j);
  std::ostringstream sink;
  cli::cmd_sweep(c, sink);
  const auto first = read_csvs(dir);
  std::filesystem::remove_all(dir);
  cli::cmd_sweep(c, sink);
  const auto second = read_csvs(dir);
  std::filesystem::remove_all(dir);
  const bool pass = !first.empty() && first == second && first.count("sweep.csv");
  return {pass, "two sweep runs, " + std::to_string(first.size()) + " CSV files, " +
                    (first == second ? "byte-identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Outcome (*)()> criteria = {criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 7; ++i) which.push_back(i);

  bool all = true;
  for (int n : which) {
    if (n < 1 || n > 7) {
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
    }
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.summary.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
