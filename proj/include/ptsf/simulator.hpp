#ifndef PTSF_SIMULATOR_HPP
#define PTSF_SIMULATOR_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptsf/errors.hpp"
#include "ptsf/format.hpp"
#include "ptsf/kernel.hpp"
#include "ptsf/scenario.hpp"

namespace ptsf {

struct TrajectorySample {
  double t = 0.0;
  std::vector<double> x;
  double u = 0.0;
  double u_nom = 0.0;
  double safe_bound = 0.0;  // alpha_n / esf bound; NaN when no bound applies
  std::vector<double> h;
  bool override_active = false;
  bool mu_clipped = false;
};

/// Uniformly sampled record of one simulation run, first sample at t0.
struct Trajectory {
  std::size_t order = 0;
  double dt = 0.0;
  std::vector<TrajectorySample> samples;
};

struct Metrics {
  double min_h1 = 0.0;
  double min_y_margin = 0.0;  // max of y = x1 on [t0, t0+T)
  double max_abs_u = 0.0;
  std::optional<double> max_abs_jerk_on_override;  // order 2 only
  double x1_at_T = 0.0;
  std::vector<std::pair<double, double>> override_intervals;
};

/// Integrator-chain vector field: (x2, ..., xn, u).
std::vector<double> chain_rhs(std::span<const double> x, double u);

/// Classical fourth-order Runge-Kutta step; the control law is re-evaluated
/// at every stage point. Throws NumericError if the law returns a
/// non-finite command.
template <typename ControlLaw>
std::vector<double> step_rk4(std::span<const double> x, double t, double dt,
                             ControlLaw&& control) {
  if (dt <= 0.0) throw DomainError("step_rk4: dt must be positive");
  const std::size_t n = x.size();
  auto rhs = [&](std::span<const double> xs, double ts) {
    const double u = control(xs, ts);
    if (!std::isfinite(u))
      throw NumericError("non-finite control " + format_shortest(u) +
                         " at t=" + format_shortest(ts) +
                         ", x=" + format_state(xs));
    return chain_rhs(xs, u);
  };
  auto shifted = [&](std::span<const double> k, double a) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * k[i];
    return out;
  };
  const std::vector<double> k1 = rhs(x, t);
  const std::vector<double> k2 = rhs(shifted(k1, 0.5 * dt), t + 0.5 * dt);
  const std::vector<double> k3 = rhs(shifted(k2, 0.5 * dt), t + 0.5 * dt);
  const std::vector<double> k4 = rhs(shifted(k3, dt), t + dt);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

/// Scenario invariant violations as key-path messages; empty when the
/// scenario is runnable.
std::vector<std::string> scenario_issues(const Scenario& scenario);

/// Integrate the scenario from t0 to t_end on the fixed grid t0 + k dt,
/// recording every sample. With the prescribed-time filter, x1 is captured
/// at the first grid point reaching t0 + T and the ramp branch takes over
/// from that sample on. Deterministic: identical scenarios produce
/// identical trajectories.
Trajectory simulate(const Scenario& scenario);

/// Maximal runs of samples with the override flag set, as closed-open time
/// intervals.
std::vector<std::pair<double, double>> detect_overrides(
    const Trajectory& trajectory);

/// Largest |du/dt| over override intervals, central differences inside an
/// interval and one-sided at its ends. Only meaningful for the double
/// integrator, where du/dt is the jerk of x1.
double max_abs_jerk_on_override(const Trajectory& trajectory);

Metrics compute_metrics(const Trajectory& trajectory,
                        const HorizonClock& clock);

struct FilterVariantResult {
  std::string label;
  FilterChoice filter;
  Trajectory trajectory;
  Metrics metrics;
};

struct ComparisonReport {
  std::vector<FilterVariantResult> variants;
};

/// Run the base scenario once per filter choice, everything else shared.
ComparisonReport compare_filters(const Scenario& base,
                                 const std::vector<FilterChoice>& variants);

/// Comparison over explicit scenarios; they must agree on order, initial
/// state, nominal controller and step size.
ComparisonReport compare_scenarios(std::span<const Scenario> variants);

}  // namespace ptsf

#endif  // PTSF_SIMULATOR_HPP
