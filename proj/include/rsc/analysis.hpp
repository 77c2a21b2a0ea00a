#pragma once

// Executable versions of the model-comparison propositions, pairwise model
// comparison, the (f, k) sweep over Models IV and V, and reproducible random
// parameter draws.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rsc/model.hpp"
#include "rsc/oracle.hpp"
#include "rsc/solution.hpp"

namespace rsc {

// ---------------------------------------------------------------- draws

inline constexpr std::uint64_t kDefaultSeed = 20170601;

/// One parameter set drawn uniformly from the ranges below (p2 = p1 + 0.2).
///   a [2,6], eps [0.05,0.9], c [0.2,2], c_d, c_r [0.1,1.5], c_m [1,5],
///   p_m [0.2, a/2], mu [0.1,0.9], beta_L [0.3,2], beta_H beta_L + [0.05,1],
///   pi_R0 [0,0.5], f, k [0,3], e_m [0.1,1], e_0 [0,2], tau_0 [0.2,0.9],
///   p1 [p_m, a].
ModelParams random_params(std::mt19937_64& rng);

/// The first n draws from `seed` that pass validate() and `accept`. Throws
/// std::runtime_error after max_attempts draws.
std::vector<ModelParams> feasible_draws(std::size_t n, std::uint64_t seed,
                                        const std::function<bool(const ModelParams&)>& accept,
                                        std::size_t max_attempts = 100000);

// ---------------------------------------------------------- propositions

enum class Verdict { holds, fails, vacuous, singular };
std::string_view to_string(Verdict v);

struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  char direction = '>';    // '<' or '>'; strict
  std::string singular;    // non-empty when a side could not be evaluated

  bool pass() const;
};

/// One printed implication: every antecedent true implies the conclusion.
struct Claim {
  std::string name;
  std::vector<Inequality> antecedents;
  Inequality conclusion;
  Verdict verdict = Verdict::vacuous;
};

struct PropositionReport {
  int id = 0;
  Provenance source = Provenance::closed_form;
  std::vector<Claim> claims;
  /// singular if an active claim cannot be evaluated, fails if an active
  /// claim fails, holds if at least one claim is active and all active
  /// claims hold, vacuous otherwise. A claim is active when all of its
  /// antecedents pass.
  Verdict verdict = Verdict::vacuous;
  std::vector<std::string> notes;
};

/// Evaluates proposition n (1-8) as printed at the given parameters. The
/// comparison models use the parameters as given (f and k are not zeroed).
/// Oracle failures propagate as exceptions.
PropositionReport check_proposition(int n, const ModelParams& p, Provenance source,
                                    const SolveOptions& opts = {});

// ------------------------------------------------------------ comparison

struct ComparisonRow {
  std::string name;
  double first = 0.0;
  double second = 0.0;
  double diff = 0.0;  // first - second
};

struct ModelComparison {
  ModelId first = ModelId::I;
  ModelId second = ModelId::I;
  Provenance source = Provenance::closed_form;
  std::vector<ComparisonRow> rows;

  const ComparisonRow& get(std::string_view name) const;
};

/// Decisions and profits of two models side by side. p2 and the retailer 2
/// profit are listed only when both models are competitive. Throws
/// SingularError for singular closed forms.
ModelComparison compare_models(const ModelParams& p, ModelId first, ModelId second,
                               Provenance source, const SolveOptions& opts = {});

// ----------------------------------------------------------------- sweep

inline constexpr std::array<const char*, 8> kSweepColumns = {
    "w_H4", "w_L4", "tau_H4", "tau_L4", "w_H5", "w_L5", "tau_H5", "tau_L5"};

enum class SweepGrid { paired, cartesian };
std::string_view to_string(SweepGrid g);
std::optional<SweepGrid> parse_sweep_grid(std::string_view s);

struct SweepRow {
  double f = 0.0;
  double k = 0.0;
  std::array<double, 8> values{};  // kSweepColumns; NaN when unavailable
  std::string status;              // "ok" or the reason values are missing
};

struct SweepTable {
  Provenance source = Provenance::closed_form;
  std::vector<SweepRow> rows;
};

/// Models IV and V over the (f, k) grid. paired zips the two lists (equal
/// lengths required), cartesian takes every combination with f outermost.
/// Singular closed forms and oracle failures leave NaN values and a status.
/// Throws std::invalid_argument on an empty grid.
SweepTable sweep(const ModelParams& p, const std::vector<double>& f_values,
                 const std::vector<double>& k_values, Provenance source,
                 SweepGrid grid = SweepGrid::paired, const SolveOptions& opts = {});

struct TableReferenceRow {
  double f = 0.0;
  double k = 0.0;
  std::array<double, 8> values{};
};

/// The published decision table for Models IV and V.
const std::vector<TableReferenceRow>& table1_reference();

struct CellDeviation {
  double f = 0.0;
  double k = 0.0;
  std::string column;
  double value = 0.0;
  double reference = 0.0;
  double deviation = 0.0;  // value - reference
};

/// Deviation of every sweep cell whose (f, k) appears in the reference.
std::vector<CellDeviation> reference_deviations(const SweepTable& t);

struct OrderingCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Rowwise Model V dominance (each V column strictly above its IV column)
/// and every column nondecreasing down the rows. NaN cells fail.
std::vector<OrderingCheck> ordering_checks(const SweepTable& t);

}  // namespace rsc
