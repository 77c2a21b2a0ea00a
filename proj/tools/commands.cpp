#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "rsc/analysis.hpp"
#include "rsc/closed_form.hpp"
#include "rsc/cross_check.hpp"
#include "rsc/errors.hpp"
#include "rsc/oracle.hpp"

namespace rsc::cli {

namespace {

std::string num(double v) { return format_number(v); }

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string out_path(const RunConfig& c, const char* file) {
  std::filesystem::create_directories(c.out_dir);
  return (std::filesystem::path(c.out_dir) / file).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

// Runs fn, turning solver errors into an exit code and a message.
template <class Fn>
int guarded(Fn&& fn, std::string& message) {
  try {
    fn();
    return kExitOk;
  } catch (const SingularError& e) {
    message = e.what();
    return kExitSingular;
  } catch (const InfeasibleError& e) {
    message = e.what();
    return kExitInfeasible;
  } catch (const DivergenceError& e) {
    message = e.what();
    return kExitDivergence;
  }
}

void describe(std::ostream& os, const Solution& s) {
  os << "Model " << to_string(s.model) << " (" << to_string(s.provenance) << ")\n";
  os << "  w_H=" << num(s.menu.w_H) << " w_L=" << num(s.menu.w_L)
     << " tau_H=" << num(s.menu.tau_H) << " tau_L=" << num(s.menu.tau_L) << "\n";
  os << "  p1=" << num(s.prices.p1);
  if (s.prices.p2) os << " p2=" << num(*s.prices.p2);
  os << "\n  profits: manufacturer=" << num(s.profits.manufacturer)
     << " retailer1=" << num(s.profits.retailer1);
  if (is_competitive(s.model)) os << " retailer2=" << num(s.profits.retailer2);
  os << " chain=" << num(s.profits.chain) << "\n";
  os << "  screening: " << (s.screening.feasible ? "feasible" : "infeasible")
     << ", binding " << s.screening.binding_set() << "\n";
}

void diagnose_solution(std::ostream& os, const Solution& s, const ModelParams& p) {
  describe(os, s);
  os << "  slacks: ir_L=" << num(s.screening.ir_L) << " ir_H=" << num(s.screening.ir_H)
     << " ic_H=" << num(s.screening.ic_H) << " ic_L=" << num(s.screening.ic_L) << "\n";
  for (const auto& w : s.warnings) os << "  warning: " << w << "\n";
  for (const auto& n : s.notes) os << "  note: " << n << "\n";
  for (const auto& r : s.residuals)
    os << "  residual " << r.stage << ": gradient " << num(r.gradient_norm) << ", kkt "
       << num(r.kkt_residual) << ", scaled " << num(r.scaled) << ", active " << r.active
       << "\n";
  if (s.provenance == Provenance::oracle && is_competitive(s.model)) {
    const NashCheck n = verify_nash(s, p);
    os << "  nash: " << n.deviations << " deviations per retailer, best gain retailer1 "
       << num(n.max_gain_retailer1) << ", retailer2 " << num(n.max_gain_retailer2) << "\n";
  }
}

std::string inequality_text(const Inequality& q) {
  std::string s = q.name + ": " + num(q.lhs) + " " + q.direction + " " + num(q.rhs);
  if (!q.singular.empty()) return s + " (singular: " + q.singular + ")";
  return s + (q.pass() ? " (true)" : " (false)");
}

CsvTable sweep_table(const std::vector<SweepTable>& tables) {
  CsvTable t;
  t.header = {"source", "f", "k"};
  for (const char* col : kSweepColumns) t.header.push_back(col);
  t.header.push_back("status");
  for (const auto& tab : tables) {
    for (const auto& r : tab.rows) {
      std::vector<std::string> row{std::string(to_string(tab.source)), num(r.f), num(r.k)};
      for (double v : r.values) row.push_back(num(v));
      row.push_back(r.status);
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

}  // namespace

CsvTable solution_table(const std::vector<Solution>& solutions) {
  CsvTable t;
  t.header = {"model",   "provenance", "w_H",        "w_L",         "tau_H",
              "tau_L",   "p1",         "p2",         "q1",          "q2",
              "Q",       "demand_negative", "manufacturer", "retailer1", "retailer2",
              "chain",   "emission",   "recycling_H", "recycling_L", "retailer2_penalty",
              "ir_L",    "ir_H",       "ic_H",       "ic_L",        "binding",
              "feasible", "warnings"};
  for (const auto& s : solutions) {
    t.rows.push_back({std::string(to_string(s.model)),
                      std::string(to_string(s.provenance)),
                      num(s.menu.w_H),
                      num(s.menu.w_L),
                      num(s.menu.tau_H),
                      num(s.menu.tau_L),
                      num(s.prices.p1),
                      format_number(s.prices.p2),
                      num(s.demand.q1),
                      num(s.demand.q2),
                      num(s.demand.Q),
                      s.demand.negative ? "true" : "false",
                      num(s.profits.manufacturer),
                      num(s.profits.retailer1),
                      num(s.profits.retailer2),
                      num(s.profits.chain),
                      num(s.transfers.emission),
                      num(s.transfers.recycling_H),
                      num(s.transfers.recycling_L),
                      num(s.transfers.retailer2_penalty),
                      num(s.screening.ir_L),
                      num(s.screening.ir_H),
                      num(s.screening.ic_H),
                      num(s.screening.ic_L),
                      s.screening.binding_set(),
                      s.screening.feasible ? "true" : "false",
                      join(s.warnings, ";")});
  }
  return t;
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  if (!c.model) throw ConfigError({"model: required for solve"});
  const ModelId m = *c.model;
  require_p2(c, m);

  std::ostringstream diag;
  diag << "configuration\n" << to_json(c).dump(2) << "\n\n";
  std::vector<Solution> solutions;
  int code = kExitOk;
  auto record = [&](int rc, const std::string& what, const char* source) {
    if (rc == kExitOk) return;
    diag << source << ": " << what << "\n";
    out << source << ": " << what << "\n";
    if (code == kExitOk) code = rc;
  };

  std::string msg;
  if (c.wants(Provenance::closed_form)) {
    const int rc = guarded([&] { solutions.push_back(closed_form(m, c.params)); }, msg);
    record(rc, msg, "closed_form");
  }
  std::optional<Solution> oracle;
  if (c.wants(Provenance::oracle)) {
    const int rc = guarded([&] { oracle = oracle_solve(m, c.params, c.solve); }, msg);
    record(rc, msg, "oracle");
    if (oracle) solutions.push_back(*oracle);
  }

  for (const auto& s : solutions) {
    describe(out, s);
    diagnose_solution(diag, s, c.params);
  }
  write_csv_file(out_path(c, "solution.csv"), solution_table(solutions));

  if (c.source == SourceSelection::both && oracle) {
    const CrossCheckReport r = cross_check(m, c.params, *oracle);
    CsvTable t;
    t.header = {"model", "variable", "closed_form", "oracle", "abs_dev", "rel_dev", "status"};
    for (const auto& e : r.entries)
      t.rows.push_back({std::string(to_string(m)), e.name, num(e.closed_form), num(e.oracle),
                        num(e.abs_dev), num(e.rel_dev), e.status});
    write_csv_file(out_path(c, "crosscheck.csv"), t);
    out << "cross-check: largest deviation " << num(r.max_abs_dev()) << "\n";
  }
  write_text(out_path(c, "diagnostics.txt"), diag.str());
  return code;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  if (c.f_values.empty() || c.k_values.empty())
    throw ConfigError({"sweep: f_values and k_values must be nonempty"});
  if (c.grid == SweepGrid::paired && c.f_values.size() != c.k_values.size())
    throw ConfigError({"sweep: paired grid needs f_values and k_values of equal length"});
  require_p2(c, ModelId::IV);

  std::vector<SweepTable> tables;
  for (Provenance src : {Provenance::closed_form, Provenance::oracle})
    if (c.wants(src)) tables.push_back(sweep(c.params, c.f_values, c.k_values, src, c.grid, c.solve));
  write_csv_file(out_path(c, "sweep.csv"), sweep_table(tables));

  CsvTable ref;
  ref.header = {"f", "k"};
  for (const char* col : kSweepColumns) ref.header.push_back(col);
  for (const auto& r : table1_reference()) {
    std::vector<std::string> row{num(r.f), num(r.k)};
    for (double v : r.values) row.push_back(num(v));
    ref.rows.push_back(std::move(row));
  }
  write_csv_file(out_path(c, "table1_reference.csv"), ref);

  CsvTable dev, ord;
  dev.header = {"source", "f", "k", "column", "value", "reference", "deviation"};
  ord.header = {"source", "check", "pass", "detail"};
  std::ostringstream diag;
  diag << "configuration\n" << to_json(c).dump(2) << "\n\n";
  for (const auto& t : tables) {
    const std::string src(to_string(t.source));
    for (const auto& d : reference_deviations(t))
      dev.rows.push_back({src, num(d.f), num(d.k), d.column, num(d.value), num(d.reference),
                          num(d.deviation)});
    int passed = 0, total = 0;
    for (const auto& o : ordering_checks(t)) {
      ord.rows.push_back({src, o.name, o.pass ? "true" : "false", o.detail});
      passed += o.pass;
      ++total;
      if (!o.pass) diag << src << " ordering failed: " << o.name << " (" << o.detail << ")\n";
    }
    for (const auto& r : t.rows)
      if (r.status != "ok") diag << src << " f=" << num(r.f) << " k=" << num(r.k) << ": " << r.status << "\n";
    out << src << ": " << t.rows.size() << " rows, orderings " << passed << "/" << total
        << " pass\n";
  }
  write_csv_file(out_path(c, "sweep_deviations.csv"), dev);
  write_csv_file(out_path(c, "sweep_orderings.csv"), ord);
  write_text(out_path(c, "diagnostics.txt"), diag.str());
  return kExitOk;
}

int cmd_propositions(const RunConfig& c, std::ostream& out) {
  for (ModelId m : {ModelId::III, ModelId::IV, ModelId::V}) require_p2(c, m);
  std::ostringstream diag;
  diag << "configuration\n" << to_json(c).dump(2) << "\n\n";
  int code = kExitOk;

  CsvTable rows, claims;
  rows.header = {"id",           "antecedents",           "verdict_closed_form",
                 "conclusions_closed_form", "verdict_oracle", "conclusions_oracle", "notes"};
  claims.header = {"id", "source", "claim", "verdict", "antecedents", "conclusion"};
  for (int n = 1; n <= 8; ++n) {
    std::vector<std::string> ante, notes;
    std::set<std::string> seen_ante, seen_notes;
    std::string verdict[2] = {"", ""}, concl[2] = {"", ""};
    const Provenance sources[2] = {Provenance::closed_form, Provenance::oracle};
    for (int i = 0; i < 2; ++i) {
      if (!c.wants(sources[i])) continue;
      std::string msg;
      std::optional<PropositionReport> r;
      const int rc = guarded([&] { r = check_proposition(n, c.params, sources[i], c.solve); }, msg);
      if (!r) {
        verdict[i] = "error";
        concl[i] = msg;
        diag << "proposition " << n << " " << to_string(sources[i]) << ": " << msg << "\n";
        if (code == kExitOk) code = rc;
        continue;
      }
      verdict[i] = std::string(to_string(r->verdict));
      std::vector<std::string> cs;
      for (const auto& cl : r->claims) {
        std::vector<std::string> a;
        for (const auto& q : cl.antecedents) {
          a.push_back(inequality_text(q));
          if (seen_ante.insert(a.back()).second) ante.push_back(a.back());
        }
        cs.push_back(cl.name + " [" + std::string(to_string(cl.verdict)) + "]: " +
                     inequality_text(cl.conclusion));
        claims.rows.push_back({std::to_string(n), std::string(to_string(sources[i])), cl.name,
                               std::string(to_string(cl.verdict)), join(a, "; "),
                               inequality_text(cl.conclusion)});
      }
      concl[i] = join(cs, "; ");
      for (const auto& note : r->notes)
        if (seen_notes.insert(note).second) notes.push_back(note);
    }
    rows.rows.push_back({std::to_string(n), join(ante, "; "), verdict[0], concl[0], verdict[1],
                         concl[1], join(notes, "; ")});
    out << "proposition " << n << ": closed_form " << (verdict[0].empty() ? "-" : verdict[0])
        << ", oracle " << (verdict[1].empty() ? "-" : verdict[1]) << "\n";
  }
  write_csv_file(out_path(c, "propositions.csv"), rows);
  write_csv_file(out_path(c, "propositions_claims.csv"), claims);

  // Directional claim of the second proposition over random draws.
  auto accept = [](const ModelParams& p) {
    if (!(p.f * p.e_m > 0.0)) return false;
    for (ModelId m : {ModelId::I, ModelId::II}) {
      const ClosedFormSet s = closed_form_values(m, p);
      if (!s.get("tau_H").ok() || !s.get("tau_L").ok()) return false;
    }
    return true;
  };
  CsvTable rnd;
  rnd.header = {"seed", "draw", "f", "e_m", "mu", "beta_H", "beta_L", "tau_H_diff",
                "tau_L_diff", "verdict"};
  int holds = 0;
  const auto draws = feasible_draws(static_cast<std::size_t>(c.random_draws), c.seed, accept);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const ModelParams& p = draws[i];
    const PropositionReport r = check_proposition(2, p, Provenance::closed_form);
    holds += r.verdict == Verdict::holds;
    rnd.rows.push_back({std::to_string(c.seed), std::to_string(i), num(p.f), num(p.e_m),
                        num(p.mu), num(p.beta_H), num(p.beta_L), num(r.claims[0].conclusion.lhs),
                        num(r.claims[1].conclusion.lhs), std::string(to_string(r.verdict))});
  }
  write_csv_file(out_path(c, "propositions_random.csv"), rnd);
  out << "proposition 2 on " << draws.size() << " random draws (seed " << c.seed
      << "): holds in " << holds << "\n";
  diag << "proposition 2 random draws: seed " << c.seed << ", holds in " << holds << " of "
       << draws.size() << "\n";
  write_text(out_path(c, "diagnostics.txt"), diag.str());
  return code;
}

int cmd_crosscheck(const RunConfig& c, std::ostream& out) {
  std::vector<ModelId> models;
  if (c.model)
    models.push_back(*c.model);
  else
    models.assign(kAllModels.begin(), kAllModels.end());
  for (ModelId m : models) require_p2(c, m);

  std::ostringstream diag;
  diag << "configuration\n" << to_json(c).dump(2) << "\n\n";
  CsvTable t;
  t.header = {"model",   "variable", "closed_form", "oracle",
              "abs_dev", "rel_dev",  "status",      "closed_form_feasible"};
  int code = kExitOk;
  for (ModelId m : models) {
    const std::string name(to_string(m));
    std::string msg;
    std::optional<CrossCheckReport> r;
    const int rc = guarded([&] { r = cross_check(m, c.params, c.solve); }, msg);
    if (!r) {
      out << "Model " << name << ": " << msg << "\n";
      diag << "Model " << name << ": " << msg << "\n";
      if (code == kExitOk) code = rc;
      continue;
    }
    for (const auto& e : r->entries)
      t.rows.push_back({name, e.name, num(e.closed_form), num(e.oracle), num(e.abs_dev),
                        num(e.rel_dev), e.status, r->closed_form_feasible ? "true" : "false"});
    out << "Model " << name << ": largest deviation " << num(r->max_abs_dev()) << "\n";
    diagnose_solution(diag, r->oracle, c.params);
    for (const auto& w : r->closed_form_warnings) diag << "  closed-form warning: " << w << "\n";
  }
  write_csv_file(out_path(c, "crosscheck.csv"), t);
  write_text(out_path(c, "diagnostics.txt"), diag.str());
  return code;
}

}  // namespace rsc::cli
