#ifndef PTSF_ERRORS_HPP
#define PTSF_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace ptsf {

/// Argument outside the mathematical domain of an operation
/// (e.g. evaluating the unclipped blow-up gain at or past the terminal time).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A state jet was requested deeper than the chain provides without
/// involving the control input.
class DepthError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The initial condition starts at or beyond the barrier (x1(t0) >= 0),
/// so no gain selection can establish initial barrier positivity.
class InitiallyUnsafeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An initial barrier value sits numerically on zero, making the next
/// stage's gain bound undefined.
class DegenerateBarrierError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation defined only for a specific chain order (e.g. the
/// exponential-safety baseline and the jerk metric require n = 2).
class UnsupportedOrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The filter was asked for a post-terminal command without the terminal
/// state snapshot it needs.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A non-finite value appeared during integration; the message carries the
/// failing time stamp and state.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario schema or invariant violations. Collects every issue found so
/// callers can report them all at once; each message carries the offending
/// key path.
class ScenarioError : public std::invalid_argument {
 public:
  explicit ScenarioError(std::vector<std::string> issues)
      : std::invalid_argument(join(issues)), issues_(std::move(issues)) {}
  explicit ScenarioError(const std::string& issue)
      : ScenarioError(std::vector<std::string>{issue}) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace ptsf

#endif  // PTSF_ERRORS_HPP
