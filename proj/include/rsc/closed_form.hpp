#pragma once

// Literal evaluation of the printed solution formulas for Models I-V.
//
// The formulas are transcribed exactly as printed, including terms that do
// not reduce between models (for instance the w_H formula of Model II carries
// an extra 1/4 at f = 0). Nothing here is repaired; use cross_check() to see
// how far each value sits from the numerical oracle.

#include <optional>
#include <string>
#include <vector>

#include "rsc/model.hpp"
#include "rsc/solution.hpp"

namespace rsc {

struct ClosedFormValue {
  std::string name;      // w_H, w_L, tau_H, tau_L, p1, p2
  double value = 0.0;    // NaN when singular
  std::string singular;  // offending denominator, empty when finite

  bool ok() const { return singular.empty(); }
};

struct ClosedFormSet {
  ModelId model = ModelId::I;
  std::vector<ClosedFormValue> values;
  std::vector<std::string> notes;

  const ClosedFormValue& get(std::string_view name) const;
  bool all_ok() const;
  /// First singular expression, or empty.
  std::string first_singular() const;
};

/// Every printed variable of the model with its own singularity status.
ClosedFormSet closed_form_values(ModelId model, const ModelParams& p);

/// Closed-form Solution with model-core diagnostics attached. Throws
/// SingularError naming the first zero denominator.
Solution closed_form(ModelId model, const ModelParams& p);

}  // namespace rsc
