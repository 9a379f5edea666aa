#include "ptsf/backstepping.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "ptsf/errors.hpp"

namespace ptsf {

namespace {

// Below this magnitude an initial barrier value counts as sitting on the
// barrier itself: the next stage's gain bound is undefined there.
constexpr double kDegenerateBarrierTol = 1e-12;

void check_stack_inputs(std::span<const double> x, const GainVector& gains) {
  if (x.empty()) throw DomainError("barrier stack: state must be nonempty");
  if (gains.size() != x.size())
    throw DomainError("barrier stack: got " + std::to_string(gains.size()) +
                      " gains for order " + std::to_string(x.size()));
}

// One stage-wise pass over the gain recursion at t = t0. The chooser maps
// (stage index, lower bound) to the gain actually used, which the next
// stage's bound then depends on.
GainSelection run_gain_recursion(
    std::span<const double> x0, const HorizonClock& clock,
    const std::function<double(std::size_t, double)>& choose, double c_n) {
  const std::size_t n = x0.size();
  if (n == 0) throw DomainError("gain selection: state must be nonempty");
  if (x0[0] >= 0.0)
    throw InitiallyUnsafeError(
        "gain selection: x0[0] must be negative (initially safe), got " +
        std::to_string(x0[0]));

  GainSelection out;
  DerivativeJet alpha_prev = DerivativeJet::zero(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t ord = n - 1 - i;
    const DerivativeJet h_jet = alpha_prev - jet_lift_state(x0, i, ord);
    const double h0 = h_jet.value();
    if (std::abs(h0) < kDegenerateBarrierTol)
      throw DegenerateBarrierError(
          "gain selection: initial barrier h_" + std::to_string(i + 1) +
          "(t0) is numerically zero");
    const double bound = (x0[i + 1] - alpha_prev.coeff(1)) / h0;
    out.lower_bounds.push_back(bound);

    const double ci = choose(i, bound);
    out.gains.c.push_back(ci);
    const DerivativeJet mu_jet =
        jet_of_mu(2, 0.0, clock.horizon(), ord, clock.mu_max());
    alpha_prev = (mu_jet * h_jet).scaled(ci) + alpha_prev.derivative();
  }
  out.gains.c.push_back(c_n);
  return out;
}

}  // namespace

DerivativeJet jet_lift_state(std::span<const double> x, std::size_t index,
                             std::size_t order) {
  if (index + order >= x.size())
    throw DepthError("jet_lift_state: derivatives of x[" +
                     std::to_string(index) + "] to order " +
                     std::to_string(order) +
                     " would require the control input (n = " +
                     std::to_string(x.size()) + ")");
  std::vector<double> coeffs(order + 1);
  for (std::size_t k = 0; k <= order; ++k) coeffs[k] = x[index + k];
  return DerivativeJet(std::move(coeffs));
}

DerivativeJet jet_of_mu(int m, double t_rel, double horizon,
                        std::size_t order, double mu_max) {
  if (mu_clip_active(m, t_rel, horizon, mu_max))
    return DerivativeJet::constant(mu_max, order);
  std::vector<double> coeffs(order + 1);
  for (std::size_t k = 0; k <= order; ++k)
    coeffs[k] = mu_derivative(m, static_cast<int>(k), t_rel, horizon);
  return DerivativeJet(std::move(coeffs));
}

namespace {

// Flat-buffer form of the stack recursion; the jet algebra reduces to a
// Leibniz convolution per stage. Exports values and alpha jets only when
// `out` is given, which keeps the per-integration-stage path lean.
double run_stack_recursion(std::span<const double> x, double t_rel,
                           const HorizonClock& clock, const GainVector& gains,
                           BarrierStack* out) {
  const std::size_t n = x.size();
  const bool clipped =
      mu_clip_active(2, t_rel, clock.horizon(), clock.mu_max());

  std::vector<double> mu_c(n, 0.0);
  if (clipped)
    mu_c[0] = clock.mu_max();
  else
    for (std::size_t k = 0; k < n; ++k)
      mu_c[k] =
          mu_derivative(2, static_cast<int>(k), t_rel, clock.horizon());

  std::vector<double> alpha_prev(n + 1, 0.0);
  std::vector<double> h(n, 0.0);
  std::vector<double> alpha_next(n, 0.0);
  std::vector<double> binom(n, 0.0);

  if (out) {
    out->h.reserve(n);
    out->alpha.reserve(n);
    out->alpha_jets.reserve(n);
    out->mu2_clipped = clipped;
  }

  double alpha_n = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ord = n - 1 - i;
    for (std::size_t k = 0; k <= ord; ++k) h[k] = alpha_prev[k] - x[i + k];

    std::fill(binom.begin(), binom.begin() + ord + 1, 0.0);
    binom[0] = 1.0;
    for (std::size_t k = 0; k <= ord; ++k) {
      if (k > 0)
        for (std::size_t j = k; j > 0; --j) binom[j] += binom[j - 1];
      double leibniz = 0.0;
      for (std::size_t j = 0; j <= k; ++j)
        leibniz += binom[j] * mu_c[j] * h[k - j];
      alpha_next[k] = gains[i] * leibniz + alpha_prev[k + 1];
    }

    alpha_n = alpha_next[0];
    if (out) {
      out->h.push_back(h[0]);
      out->alpha.push_back(alpha_n);
      out->alpha_jets.emplace_back(std::vector<double>(
          alpha_next.begin(), alpha_next.begin() + ord + 1));
    }
    std::copy(alpha_next.begin(), alpha_next.begin() + ord + 1,
              alpha_prev.begin());
  }
  return alpha_n;
}

}  // namespace

BarrierStack barrier_stack(std::span<const double> x, double t,
                           const HorizonClock& clock,
                           const GainVector& gains) {
  check_stack_inputs(x, gains);
  BarrierStack stack;
  run_stack_recursion(x, clock.elapsed(t), clock, gains, &stack);
  return stack;
}

double barrier_alpha_n(std::span<const double> x, double t,
                       const HorizonClock& clock, const GainVector& gains) {
  check_stack_inputs(x, gains);
  return run_stack_recursion(x, clock.elapsed(t), clock, gains, nullptr);
}

GainSelection select_gains_detailed(std::span<const double> x0,
                                    const HorizonClock& clock, double margin,
                                    double c_n) {
  if (margin <= 0.0)
    throw DomainError("select_gains: margin must be positive");
  if (c_n < 0.0)
    throw DomainError("select_gains: last gain must be >= 0, got " +
                      std::to_string(c_n));
  return run_gain_recursion(
      x0, clock,
      [margin](std::size_t, double bound) {
        return std::max(0.0, bound) + margin;
      },
      c_n);
}

std::vector<double> minimal_gains(std::span<const double> x0,
                                  const HorizonClock& clock, double margin) {
  return select_gains_detailed(x0, clock, margin, 0.0).lower_bounds;
}

GainVector select_gains(std::span<const double> x0, const HorizonClock& clock,
                        double margin, double c_n) {
  return select_gains_detailed(x0, clock, margin, c_n).gains;
}

std::vector<double> gain_bounds_for(const GainVector& gains,
                                    std::span<const double> x0,
                                    const HorizonClock& clock) {
  check_stack_inputs(x0, gains);
  return run_gain_recursion(
             x0, clock,
             [&gains](std::size_t i, double) { return gains[i]; },
             gains.c.back())
      .lower_bounds;
}

bool validate_gains(const GainVector& gains, std::span<const double> x0,
                    const HorizonClock& clock) {
  check_stack_inputs(x0, gains);
  if (x0[0] >= 0.0)
    throw InitiallyUnsafeError(
        "validate_gains: x0[0] must be negative (initially safe), got " +
        std::to_string(x0[0]));
  if (gains.c.back() < 0.0) return false;

  const BarrierStack stack = barrier_stack(x0, clock.t0(), clock, gains);
  for (std::size_t i = 0; i < stack.h.size(); ++i) {
    if (std::abs(stack.h[i]) < kDegenerateBarrierTol)
      throw DegenerateBarrierError("validate_gains: h_" +
                                   std::to_string(i + 1) +
                                   "(t0) is numerically zero");
    if (stack.h[i] <= 0.0) return false;
  }
  return true;
}

}  // namespace ptsf
