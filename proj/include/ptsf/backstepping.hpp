#ifndef PTSF_BACKSTEPPING_HPP
#define PTSF_BACKSTEPPING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ptsf/jet.hpp"
#include "ptsf/kernel.hpp"

namespace ptsf {

/// Backstepping gains c_1..c_n. The first n-1 must exceed the
/// state-dependent lower bounds (see minimal_gains); the last must be
/// nonnegative.
struct GainVector {
  std::vector<double> c;

  std::size_t size() const { return c.size(); }
  double operator[](std::size_t i) const { return c[i]; }

  bool operator==(const GainVector&) const = default;
};

/// Barrier values h_1..h_n and virtual controls alpha_1..alpha_n at one
/// instant, with the alpha jets the recursion produced (alpha_i carried to
/// derivative order n-i).
struct BarrierStack {
  std::vector<double> h;
  std::vector<double> alpha;
  std::vector<DerivativeJet> alpha_jets;
  bool mu2_clipped = false;

  double alpha_n() const { return alpha.back(); }
};

/// Jet of state component x[index] along the chain flow: coeffs[k] =
/// x[index + k]. Zero-based index; index + order must stay within the
/// state, since the next derivative would be the control input.
DerivativeJet jet_lift_state(std::span<const double> x, std::size_t index,
                             std::size_t order);

/// Jet of the blow-up gain mu_m with derivatives from the closed-form
/// recurrence. Once the value saturates at mu_max the jet is the constant
/// mu_max (all derivative coefficients zero), so clipped gains enter the
/// virtual-control recursion as locally frozen.
DerivativeJet jet_of_mu(int m, double t_rel, double horizon,
                        std::size_t order, double mu_max);

/// Evaluate the full backstepping transformation at state x and time t:
///   h_1 = -x_1,   h_i = -x_i + alpha_{i-1},
///   alpha_i = c_i * mu_2 * h_i + d/dt alpha_{i-1},
/// with every time derivative carried by jet arithmetic and mu_2 clipped
/// at clock.mu_max().
BarrierStack barrier_stack(std::span<const double> x, double t,
                           const HorizonClock& clock, const GainVector& gains);

/// Just the last virtual control alpha_n from the same recursion; the
/// per-integration-stage path, kept free of the jet bookkeeping.
double barrier_alpha_n(std::span<const double> x, double t,
                       const HorizonClock& clock, const GainVector& gains);

/// Stage-wise gain lower bounds c_i and the gains chosen from them.
struct GainSelection {
  std::vector<double> lower_bounds;  // bounds for stages 1..n-1
  GainVector gains;                  // chosen c_1..c_n
};

/// Lower bounds and chosen gains in one stage-wise pass: at stage i the
/// bound is (x_{i+1}(t0) - d/dt alpha_{i-1}(t0)) / h_i(t0), the gain is
/// max{0, bound} + margin, and that choice feeds the next stage's bound.
/// The last gain is taken as c_n (must be >= 0).
GainSelection select_gains_detailed(std::span<const double> x0,
                                    const HorizonClock& clock, double margin,
                                    double c_n);

/// Gain lower bounds for stages 1..n-1. Bounds past the first stage depend
/// on the gains already fixed, so intermediate stages are closed with the
/// max{0, bound} + margin policy.
std::vector<double> minimal_gains(std::span<const double> x0,
                                  const HorizonClock& clock,
                                  double margin = 0.1);

/// Gains from the margin policy: c_i = max{0, bound_i} + margin for
/// i < n, and c_n as given.
GainVector select_gains(std::span<const double> x0, const HorizonClock& clock,
                        double margin, double c_n);

/// Stage lower bounds evaluated under an externally chosen gain vector
/// (bound i uses the provided c_1..c_{i-1}).
std::vector<double> gain_bounds_for(const GainVector& gains,
                                    std::span<const double> x0,
                                    const HorizonClock& clock);

/// True iff the gains establish initial barrier positivity: every
/// h_i(t0) > 0 and c_n >= 0. Throws if the initial state is unsafe or some
/// h_i(t0) is numerically on zero.
bool validate_gains(const GainVector& gains, std::span<const double> x0,
                    const HorizonClock& clock);

}  // namespace ptsf

#endif  // PTSF_BACKSTEPPING_HPP
