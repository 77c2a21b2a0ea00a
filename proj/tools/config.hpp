#pragma once

// Run configuration: a JSON tree with sections params, solve, sweep, flags
// and output, plus top-level model, seed and random_draws. Every key is
// optional; unknown keys are errors.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsc/analysis.hpp"
#include "rsc/model.hpp"
#include "rsc/oracle.hpp"

namespace rsc::cli {

enum class SourceSelection { closed_form, oracle, both };
std::string_view to_string(SourceSelection s);

struct RunConfig {
  std::optional<ModelId> model;
  ModelParams params;
  SolveOptions solve;
  std::vector<double> f_values{3, 5, 7, 9};
  std::vector<double> k_values{2, 4, 6, 8};
  SweepGrid grid = SweepGrid::paired;
  SourceSelection source = SourceSelection::both;
  std::string out_dir = "out";
  std::uint64_t seed = kDefaultSeed;
  int random_draws = 100;

  bool wants(Provenance p) const;
};

/// Parses and validates the whole tree. Throws ConfigError listing every
/// problem found.
RunConfig load_config(const nlohmann::json& j);

/// Reads a JSON file; throws ConfigError when it cannot be read or parsed.
nlohmann::json read_config_file(const std::string& path);

/// Applies "key=value". A dotted key addresses a section ("solve.tolerance");
/// a bare key goes to params, flags, solve or sweep, whichever defines it,
/// or to the top level. The value is JSON when it parses as JSON, otherwise a
/// string. Throws ConfigError on a malformed assignment or unknown key.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Retailer 2's starting price is needed for Models III-V.
void require_p2(const RunConfig& c, ModelId m);

/// Echo of the effective configuration, in the input format.
nlohmann::json to_json(const RunConfig& c);

}  // namespace rsc::cli
