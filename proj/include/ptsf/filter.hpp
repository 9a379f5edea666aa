#ifndef PTSF_FILTER_HPP
#define PTSF_FILTER_HPP

#include <array>
#include <optional>
#include <span>

#include "ptsf/backstepping.hpp"
#include "ptsf/kernel.hpp"

namespace ptsf {

/// Post-terminal hand-off settings: the ramp 1 - nu^m(t - t0 - T, ramp_T)
/// that fades the nominal command back in, the tolerance standing in for
/// the exact x1(t0+T) = 0 test, and the blow-up clip ceiling used by the
/// filter's barrier stack.
struct FilterConfig {
  int ramp_m = 2;
  double ramp_T = 0.5;
  double terminal_eps = 1e-3;
  double mu_max = 1000.0;

  bool operator==(const FilterConfig&) const = default;
};

/// One pointwise filter evaluation: the applied command, both candidates,
/// and whether the safe bound displaced the nominal one.
struct FilterDecision {
  double u = 0.0;
  bool override_active = false;
  double alpha_n = 0.0;  // the safe bound (or NaN past the terminal time)
  double u_nom = 0.0;
};

/// min{u_nom, safe_bound} with the override flag set; the closed-form
/// solution of the one-variable, one-constraint QP.
FilterDecision min_filter_decision(double u_nom, double safe_bound);

/// Ramp factor applied to the nominal command after the terminal time:
/// 0 at t = t0 + T, rising to 1 over ramp_T, but only when the terminal
/// state actually landed on the barrier (|x1_at_T| <= terminal_eps);
/// otherwise 1. Times before t0 + T are clamped to the ramp start.
double ramp_g(double t, double x1_at_T, const HorizonClock& clock,
              const FilterConfig& config);

/// Prescribed-time safety filter:
///   t <  t0 + T : min{u_nom, alpha_n(x, t)} with the clipped blow-up gain
///   t >= t0 + T : u_nom * ramp_g(t, x1_at_T)
/// x1_at_T is the first post-terminal x1 sample and must be supplied once
/// t reaches the terminal time. The stack is evaluated with config.mu_max
/// as the clip ceiling.
FilterDecision ptsf_control(double u_nom, std::span<const double> x, double t,
                            const HorizonClock& clock, const GainVector& gains,
                            const FilterConfig& config,
                            std::optional<double> x1_at_T = std::nullopt);

/// Time-invariant exponential-safety filter for the double integrator:
/// u = min{u_nom, -(2 rho^2 x1 + 3 rho x2)}, closed-loop poles at
/// {-rho, -2 rho} while overriding.
FilterDecision esf_control(double u_nom, std::span<const double> x,
                           double rho);

/// Smallest admissible pole parameter for the exponential filter:
/// max{0, -x2(t0)/x1(t0)}.
double esf_min_rho(std::span<const double> x0);

/// State of the overridden exponential-safety loop dt_since_override
/// seconds after the override began:
///   x(t) = e^{-rho d} [ 2 - e^{-rho d}        (1 - e^{-rho d})/rho ]
///                     [ 2 rho (e^{-rho d}-1)  2 e^{-rho d} - 1     ] x_ov.
std::array<double, 2> esf_closed_form(std::span<const double> x_at_override,
                                      double rho, double dt_since_override);

}  // namespace ptsf

#endif  // PTSF_FILTER_HPP
