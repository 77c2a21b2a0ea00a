#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "rsc/errors.hpp"

namespace {

struct Options {
  std::string params_path;
  std::vector<std::string> sets;
  std::string model, source, out;
  std::uint64_t seed = 0;
  double tol = 0.0;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--params", o.params_path, "JSON configuration file");
  cmd->add_option("--set", o.sets, "override one setting, key=value (repeatable)");
  cmd->add_option("--model", o.model, "model I, II, III, IV or V")
      ->check(CLI::IsMember({"I", "II", "III", "IV", "V"}));
  cmd->add_option("--source", o.source, "closed_form, oracle or both")
      ->check(CLI::IsMember({"closed_form", "oracle", "both"}));
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "seed for random parameter draws");
  cmd->add_option("--tol", o.tol, "feasibility tolerance")->check(CLI::PositiveNumber);
}

rsc::cli::RunConfig build_config(const CLI::App& cmd, const Options& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.params_path.empty()) j = rsc::cli::read_config_file(o.params_path);
  for (const auto& s : o.sets) rsc::cli::apply_override(j, s);
  if (cmd.count("--model")) j["model"] = o.model;
  if (cmd.count("--source")) j["flags"]["source"] = o.source;
  if (cmd.count("--out")) j["output"]["dir"] = o.out;
  if (cmd.count("--seed")) j["seed"] = o.seed;
  if (cmd.count("--tol")) j["solve"]["tolerance"] = o.tol;
  return rsc::cli::load_config(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Screening-contract equilibria for reverse supply chain models"};
  app.require_subcommand(1);
  Options o;
  using Command = int (*)(const rsc::cli::RunConfig&, std::ostream&);
  std::vector<std::pair<CLI::App*, Command>> commands = {
      {app.add_subcommand("solve", "solve one model"), rsc::cli::cmd_solve},
      {app.add_subcommand("sweep", "Models IV and V over the (f, k) grid"), rsc::cli::cmd_sweep},
      {app.add_subcommand("propositions", "check the eight propositions"),
       rsc::cli::cmd_propositions},
      {app.add_subcommand("crosscheck", "closed forms against the oracle"),
       rsc::cli::cmd_crosscheck},
  };
  for (auto& [cmd, fn] : commands) add_common(cmd, o);
  CLI11_PARSE(app, argc, argv);

  for (auto& [cmd, fn] : commands) {
    if (!cmd->parsed()) continue;
    try {
      return fn(build_config(*cmd, o), std::cout);
    } catch (const rsc::ConfigError& e) {
      std::cerr << e.what() << "\n";
      return rsc::cli::kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return rsc::cli::kExitFailure;
    }
  }
  return rsc::cli::kExitUsage;
}
