#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rsc {

/// Inputs have the wrong shape for the requested model (e.g. p2 missing for
/// a competitive model).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A printed closed form divides by zero at the given parameters.
class SingularError : public std::runtime_error {
 public:
  SingularError(const std::string& expression)
      : std::runtime_error("singular parameters: denominator of " + expression +
                           " is zero"),
        expression_(expression) {}
  const std::string& expression() const { return expression_; }

 private:
  std::string expression_;
};

/// Best-response iteration did not reach a fixed point.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  /// Fixed-point gaps per iteration.
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

/// No candidate satisfied the screening constraints.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& constraint, double violation)
      : std::runtime_error("no feasible menu: most violated constraint " +
                           constraint + " (slack " + std::to_string(violation) +
                           ")"),
        constraint_(constraint),
        violation_(violation) {}
  const std::string& constraint() const { return constraint_; }
  double violation() const { return violation_; }

 private:
  std::string constraint_;
  double violation_;
};

/// Configuration failed validation; carries every violated rule.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> problems_;
};

}  // namespace rsc
