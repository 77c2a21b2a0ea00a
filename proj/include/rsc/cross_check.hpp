#pragma once

#include <string>
#include <vector>

#include "rsc/closed_form.hpp"
#include "rsc/oracle.hpp"

namespace rsc {

struct CrossCheckEntry {
  std::string name;         // w_H, w_L, tau_H, tau_L, p1, p2
  double closed_form = 0.0; // NaN when singular
  double oracle = 0.0;
  double abs_dev = 0.0;     // NaN when singular
  double rel_dev = 0.0;     // abs_dev / max(1, |oracle|)
  std::string status;       // "finite" or "singular: <denominator>"
};

struct CrossCheckReport {
  ModelId model = ModelId::I;
  std::vector<CrossCheckEntry> entries;
  /// Screening feasibility and diagnostics of the closed-form solution; empty
  /// warnings and false feasibility when it is singular.
  bool closed_form_feasible = false;
  std::vector<std::string> closed_form_warnings;
  Solution oracle;

  double max_abs_dev() const;  // over finite entries
};

CrossCheckReport cross_check(ModelId model, const ModelParams& p,
                             const SolveOptions& opts = {});

/// Builds the report from an already computed oracle solution.
CrossCheckReport cross_check(ModelId model, const ModelParams& p, const Solution& oracle);

}  // namespace rsc
