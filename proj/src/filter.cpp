#include "ptsf/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ptsf/errors.hpp"

namespace ptsf {

namespace {

double ipow(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

void check_config(const FilterConfig& config) {
  if (config.ramp_m < 1)
    throw DomainError("filter config: ramp exponent must be >= 1");
  if (config.ramp_T <= 0.0)
    throw DomainError("filter config: ramp duration must be positive");
  if (config.terminal_eps <= 0.0)
    throw DomainError("filter config: terminal_eps must be positive");
  if (config.mu_max < 1.0)
    throw DomainError("filter config: mu_max must be >= 1");
}

}  // namespace

FilterDecision min_filter_decision(double u_nom, double safe_bound) {
  FilterDecision d;
  d.u_nom = u_nom;
  d.alpha_n = safe_bound;
  d.override_active = u_nom > safe_bound;
  d.u = d.override_active ? safe_bound : u_nom;
  return d;
}

double ramp_g(double t, double x1_at_T, const HorizonClock& clock,
              const FilterConfig& config) {
  check_config(config);
  const double t_rel = std::max(0.0, t - clock.terminal_time());
  if (std::abs(x1_at_T) <= config.terminal_eps && t_rel <= config.ramp_T)
    return 1.0 - ipow(nu(t_rel, config.ramp_T), config.ramp_m);
  return 1.0;
}

FilterDecision ptsf_control(double u_nom, std::span<const double> x, double t,
                            const HorizonClock& clock, const GainVector& gains,
                            const FilterConfig& config,
                            std::optional<double> x1_at_T) {
  check_config(config);
  if (t < clock.t0())
    throw DomainError("ptsf_control: t before initialization time");

  if (t < clock.terminal_time()) {
    const HorizonClock stack_clock(clock.t0(), clock.horizon(),
                                   config.mu_max);
    return min_filter_decision(u_nom,
                               barrier_alpha_n(x, t, stack_clock, gains));
  }

  if (!x1_at_T)
    throw StateError(
        "ptsf_control: past the terminal time the filter needs the recorded "
        "x1(t0+T), t=" + std::to_string(t));
  FilterDecision d;
  d.u_nom = u_nom;
  d.u = u_nom * ramp_g(t, *x1_at_T, clock, config);
  d.override_active = false;
  d.alpha_n = std::numeric_limits<double>::quiet_NaN();
  return d;
}

FilterDecision esf_control(double u_nom, std::span<const double> x,
                           double rho) {
  if (x.size() != 2)
    throw UnsupportedOrderError(
        "esf_control: exponential-safety filter is defined for order 2, "
        "got order " + std::to_string(x.size()));
  if (rho <= 0.0)
    throw DomainError("esf_control: rho must be positive");
  const double safe_bound = -(2.0 * rho * rho * x[0] + 3.0 * rho * x[1]);
  return min_filter_decision(u_nom, safe_bound);
}

double esf_min_rho(std::span<const double> x0) {
  if (x0.size() != 2)
    throw UnsupportedOrderError("esf_min_rho: state must have length 2");
  if (x0[0] >= 0.0)
    throw InitiallyUnsafeError(
        "esf_min_rho: x0[0] must be negative (initially safe), got " +
        std::to_string(x0[0]));
  return std::max(0.0, -x0[1] / x0[0]);
}

std::array<double, 2> esf_closed_form(std::span<const double> x_at_override,
                                      double rho, double dt_since_override) {
  if (x_at_override.size() != 2)
    throw UnsupportedOrderError("esf_closed_form: state must have length 2");
  if (rho <= 0.0)
    throw DomainError("esf_closed_form: rho must be positive");
  if (dt_since_override < 0.0)
    throw DomainError("esf_closed_form: dt_since_override must be >= 0");

  const double e = std::exp(-rho * dt_since_override);
  const double m11 = 2.0 - e;
  const double m12 = (1.0 - e) / rho;
  const double m21 = 2.0 * rho * (e - 1.0);
  const double m22 = 2.0 * e - 1.0;
  return {e * (m11 * x_at_override[0] + m12 * x_at_override[1]),
          e * (m21 * x_at_override[0] + m22 * x_at_override[1])};
}

}  // namespace ptsf
