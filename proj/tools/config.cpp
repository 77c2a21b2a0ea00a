#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "rsc/errors.hpp"

namespace rsc::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kParamKeys = {
    "a",   "eps", "c", "c_d", "c_r", "c_m",   "p_m", "mu", "beta_H", "beta_L",
    "pi_R0", "f", "k", "e_m", "e_0", "tau_0", "p1",  "p2", "I_H",    "I_L"};
const std::vector<std::string> kFlagKeys = {"mu_weights_l_branch", "transfer_on_deviation",
                                            "source"};
const std::vector<std::string> kSolveKeys = {
    "leader_grid", "refine_grid",     "refine_iterations", "price_grid",
    "tau_grid",    "damping",         "tolerance",         "fixed_point_tol",
    "max_iterations", "w_max",        "p_max",             "constraint_handling",
    "penalty_weight", "compute_residuals", "threads"};
const std::vector<std::string> kSweepKeys = {"f_values", "k_values", "grid"};
const std::vector<std::string> kOutputKeys = {"dir"};
const std::vector<std::string> kTopKeys = {"model", "seed",  "random_draws", "params",
                                           "solve", "sweep", "flags",        "output"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Reads the keys of one JSON object into typed fields, collecting errors and
// rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& root, std::string name, std::vector<std::string>& errors)
      : name_(std::move(name)), errors_(errors) {
    if (name_.empty()) {
      obj_ = &root;
    } else if (root.contains(name_)) {
      obj_ = &root.at(name_);
    }
    if (obj_ && !obj_->is_object()) {
      error("", "must be an object");
      obj_ = nullptr;
    }
  }

  void number(const char* key, double& out) {
    if (const json* v = get(key)) {
      if (v->is_number())
        out = v->get<double>();
      else
        error(key, "must be a number");
    }
  }

  void optional_number(const char* key, std::optional<double>& out) {
    if (const json* v = get(key)) {
      if (v->is_null())
        out.reset();
      else if (v->is_number())
        out = v->get<double>();
      else
        error(key, "must be a number or null");
    }
  }

  void integer(const char* key, int& out) {
    if (const json* v = get(key)) {
      if (v->is_number_integer())
        out = v->get<int>();
      else
        error(key, "must be an integer");
    }
  }

  void unsigned_integer(const char* key, unsigned& out) {
    if (const json* v = get(key)) {
      if (v->is_number_unsigned())
        out = v->get<unsigned>();
      else
        error(key, "must be a nonnegative integer");
    }
  }

  void seed(const char* key, std::uint64_t& out) {
    if (const json* v = get(key)) {
      if (v->is_number_unsigned())
        out = v->get<std::uint64_t>();
      else
        error(key, "must be a nonnegative integer");
    }
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = get(key)) {
      if (v->is_boolean())
        out = v->get<bool>();
      else
        error(key, "must be true or false");
    }
  }

  void number_list(const char* key, std::vector<double>& out) {
    if (const json* v = get(key)) {
      bool ok = v->is_array();
      if (ok)
        for (const auto& x : *v) ok = ok && x.is_number();
      if (!ok) {
        error(key, "must be a list of numbers");
        return;
      }
      out = v->get<std::vector<double>>();
    }
  }

  void text(const char* key, std::string& out) {
    if (const json* v = get(key)) {
      if (v->is_string())
        out = v->get<std::string>();
      else
        error(key, "must be a string");
    }
  }

  template <class T, class Parse>
  void choice(const char* key, T& out, Parse parse, const char* allowed) {
    if (const json* v = get(key)) {
      std::optional<T> r;
      if (v->is_string()) r = parse(v->get<std::string>());
      if (r)
        out = *r;
      else
        error(key, std::string("must be one of ") + allowed);
    }
  }

  // Every key not read above is unknown.
  void finish() {
    if (!obj_) return;
    for (const auto& [key, value] : obj_->items())
      if (!seen_.count(key)) error(key, "unknown key");
  }

  void skip(const char* key) { seen_.insert(key); }

 private:
  const json* get(const char* key) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) return nullptr;
    return &obj_->at(key);
  }

  void error(const std::string& key, const std::string& what) {
    std::string path = name_;
    if (!key.empty()) path += (path.empty() ? "" : ".") + key;
    errors_.push_back(path + ": " + what);
  }

  std::string name_;
  const json* obj_ = nullptr;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

std::optional<SourceSelection> parse_source(std::string_view s) {
  if (s == "closed_form") return SourceSelection::closed_form;
  if (s == "oracle") return SourceSelection::oracle;
  if (s == "both") return SourceSelection::both;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(SourceSelection s) {
  switch (s) {
    case SourceSelection::closed_form: return "closed_form";
    case SourceSelection::oracle: return "oracle";
    case SourceSelection::both: return "both";
  }
  return "?";
}

bool RunConfig::wants(Provenance p) const {
  if (source == SourceSelection::both) return true;
  return p == Provenance::closed_form ? source == SourceSelection::closed_form
                                      : source == SourceSelection::oracle;
}

RunConfig load_config(const json& j) {
  std::vector<std::string> errors;
  RunConfig c;
  if (!j.is_object()) throw ConfigError({"configuration must be a JSON object"});

  Section top(j, "", errors);
  ModelId model = ModelId::I;
  top.choice("model", model, parse_model_id, "I, II, III, IV, V");
  if (j.contains("model") && j["model"].is_string() && parse_model_id(j["model"].get<std::string>()))
    c.model = model;
  top.seed("seed", c.seed);
  top.integer("random_draws", c.random_draws);
  for (const char* s : {"params", "solve", "sweep", "flags", "output"}) top.skip(s);
  top.finish();
  if (c.random_draws < 1) errors.push_back("random_draws: must be >= 1");

  ModelParams& p = c.params;
  Section params(j, "params", errors);
  params.number("a", p.a);
  params.number("eps", p.eps);
  params.number("c", p.c);
  params.number("c_d", p.c_d);
  params.number("c_r", p.c_r);
  params.number("c_m", p.c_m);
  params.number("p_m", p.p_m);
  params.number("mu", p.mu);
  params.number("beta_H", p.beta_H);
  params.number("beta_L", p.beta_L);
  params.number("pi_R0", p.pi_R0);
  params.number("f", p.f);
  params.number("k", p.k);
  params.number("e_m", p.e_m);
  params.number("e_0", p.e_0);
  params.number("tau_0", p.tau_0);
  params.number("p1", p.p1);
  params.optional_number("p2", p.p2);
  params.number("I_H", p.I_H);
  params.number("I_L", p.I_L);
  params.finish();

  Section flags(j, "flags", errors);
  flags.boolean("mu_weights_l_branch", p.mu_weights_l_branch);
  flags.choice("transfer_on_deviation", p.transfer_on_deviation, parse_transfer_on_deviation,
               "chosen_item, own_type");
  flags.choice("source", c.source, parse_source, "closed_form, oracle, both");
  flags.finish();

  SolveOptions& o = c.solve;
  Section solve(j, "solve", errors);
  solve.integer("leader_grid", o.leader_grid);
  solve.integer("refine_grid", o.refine_grid);
  solve.integer("refine_iterations", o.refine_iterations);
  solve.integer("price_grid", o.price_grid);
  solve.integer("tau_grid", o.tau_grid);
  solve.number("damping", o.damping);
  solve.number("tolerance", o.tolerance);
  solve.number("fixed_point_tol", o.fixed_point_tol);
  solve.integer("max_iterations", o.max_iterations);
  solve.optional_number("w_max", o.w_max);
  solve.optional_number("p_max", o.p_max);
  solve.choice("constraint_handling", o.handling, parse_constraint_handling,
               "reject_infeasible, penalty");
  solve.number("penalty_weight", o.penalty_weight);
  solve.boolean("compute_residuals", o.compute_residuals);
  solve.unsigned_integer("threads", o.threads);
  solve.finish();

  Section sweep(j, "sweep", errors);
  sweep.number_list("f_values", c.f_values);
  sweep.number_list("k_values", c.k_values);
  sweep.choice("grid", c.grid, parse_sweep_grid, "paired, cartesian");
  sweep.finish();

  Section output(j, "output", errors);
  output.text("dir", c.out_dir);
  output.finish();

  for (const auto& e : validate(p)) errors.push_back("params." + e);
  for (const auto& e : validate(o)) errors.push_back("solve." + e);
  if (c.model && is_competitive(*c.model) && !p.p2)
    errors.push_back("params.p2: required for Model " + std::string(to_string(*c.model)));
  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

json read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError({"cannot read config file " + path});
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError({path + ": " + e.what()});
  }
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError({"--set " + assignment + ": expected key=value"});
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }

  std::string section, field = key;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    field = key.substr(dot + 1);
  } else if (contains(kParamKeys, key)) {
    section = "params";
  } else if (contains(kFlagKeys, key)) {
    section = "flags";
  } else if (contains(kSolveKeys, key)) {
    section = "solve";
  } else if (contains(kSweepKeys, key)) {
    section = "sweep";
  } else if (contains(kOutputKeys, key)) {
    section = "output";
  } else if (!contains(kTopKeys, key)) {
    throw ConfigError({"--set " + key + ": unknown key"});
  }
  if (section.empty()) {
    j[key] = value;
  } else {
    if (!contains(kTopKeys, section) || section == "model" || section == "seed" ||
        section == "random_draws")
      throw ConfigError({"--set " + key + ": unknown section " + section});
    j[section][field] = value;
  }
}

void require_p2(const RunConfig& c, ModelId m) {
  if (is_competitive(m) && !c.params.p2)
    throw ConfigError({"params.p2: required for Model " + std::string(to_string(m))});
}

json to_json(const RunConfig& c) {
  const ModelParams& p = c.params;
  const SolveOptions& o = c.solve;
  json j;
  if (c.model) j["model"] = std::string(to_string(*c.model));
  j["seed"] = c.seed;
  j["random_draws"] = c.random_draws;
  j["params"] = {{"a", p.a},         {"eps", p.eps},       {"c", p.c},
                 {"c_d", p.c_d},     {"c_r", p.c_r},       {"c_m", p.c_m},
                 {"p_m", p.p_m},     {"mu", p.mu},         {"beta_H", p.beta_H},
                 {"beta_L", p.beta_L}, {"pi_R0", p.pi_R0}, {"f", p.f},
                 {"k", p.k},         {"e_m", p.e_m},       {"e_0", p.e_0},
                 {"tau_0", p.tau_0}, {"p1", p.p1},         {"I_H", p.I_H},
                 {"I_L", p.I_L}};
  j["params"]["p2"] = p.p2 ? json(*p.p2) : json(nullptr);
  j["flags"] = {{"mu_weights_l_branch", p.mu_weights_l_branch},
                {"transfer_on_deviation", std::string(to_string(p.transfer_on_deviation))},
                {"source", std::string(to_string(c.source))}};
  j["solve"] = {{"leader_grid", o.leader_grid},
                {"refine_grid", o.refine_grid},
                {"refine_iterations", o.refine_iterations},
                {"price_grid", o.price_grid},
                {"tau_grid", o.tau_grid},
                {"damping", o.damping},
                {"tolerance", o.tolerance},
                {"fixed_point_tol", o.fixed_point_tol},
                {"max_iterations", o.max_iterations},
                {"constraint_handling", std::string(to_string(o.handling))},
                {"penalty_weight", o.penalty_weight},
                {"compute_residuals", o.compute_residuals},
                {"threads", o.threads}};
  j["solve"]["w_max"] = o.w_max ? json(*o.w_max) : json(nullptr);
  j["solve"]["p_max"] = o.p_max ? json(*o.p_max) : json(nullptr);
  j["sweep"] = {{"f_values", c.f_values},
                {"k_values", c.k_values},
                {"grid", std::string(to_string(c.grid))}};
  j["output"] = {{"dir", c.out_dir}};
  return j;
}

}  // namespace rsc::cli
