#ifndef PTSF_VERIFICATION_HPP
#define PTSF_VERIFICATION_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ptsf {

enum class VerifySuite { kernel, backstepping, oracles, all };

std::optional<VerifySuite> parse_suite(std::string_view name);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // what failed, or a one-line summary
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Run the numerical checks behind the design's analytic properties:
///   kernel       - blow-up gain monotonicity, the semigroup identity,
///                  the derivative recurrence, the soft-landing envelope
///   backstepping - gain-bound/barrier-positivity equivalence, jet
///                  consistency, the closed-loop cascade, linearity
///   oracles      - closed-form solutions vs. independent integration
/// All randomness is seeded, so the report is deterministic.
VerificationReport run_verification_suite(VerifySuite suite);

}  // namespace ptsf

#endif  // PTSF_VERIFICATION_HPP
