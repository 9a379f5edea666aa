#include "ptsf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "ptsf/backstepping.hpp"
#include "ptsf/filter.hpp"

namespace ptsf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Slack for matching grid times against the terminal time; grid times are
// formed as t0 + k*dt, so an integral number of steps lands within a few
// ulps of t0 + T.
constexpr double kTerminalSlack = 1e-9;

GainVector resolve_gains(const Scenario& sc, const HorizonClock& clock) {
  if (const auto* a = std::get_if<AutoGains>(&sc.gain_policy))
    return select_gains(sc.x0, clock, a->margin, a->c_n);
  const auto& manual = std::get<ManualGains>(sc.gain_policy);
  if (!validate_gains(manual.gains, sc.x0, clock))
    throw ScenarioError(
        "gains.c: manual gains violate initial barrier positivity");
  return manual.gains;
}

}  // namespace

std::vector<std::string> scenario_issues(const Scenario& sc) {
  std::vector<std::string> issues;
  auto bad = [&](const std::string& msg) { issues.push_back(msg); };

  if (sc.order < 1) bad("n: order must be >= 1");
  if (sc.x0.size() != sc.order)
    bad("x0: expected " + std::to_string(sc.order) + " entries, got " +
        std::to_string(sc.x0.size()));
  if (!(sc.horizon > 0.0)) bad("T: horizon must be positive");
  if (!(sc.dt > 0.0)) bad("dt: step size must be positive");
  if (!(sc.t_end >= sc.t0 + sc.horizon))
    bad("t_end: must not end before the terminal time t0 + T");
  if (sc.dt > sc.t_end - sc.t0) bad("dt: exceeds the simulation span");

  const bool filtered = !std::holds_alternative<NoFilter>(sc.filter);
  if (filtered && !sc.x0.empty() && sc.x0[0] >= 0.0)
    bad("x0[0]: must be negative when a safety filter is enabled");

  if (const auto* p = std::get_if<PtsfFilter>(&sc.filter)) {
    if (p->config.ramp_m < 1) bad("filter.ramp_m: must be >= 1");
    if (!(p->config.ramp_T > 0.0)) bad("filter.ramp_T: must be positive");
    if (!(p->config.terminal_eps > 0.0))
      bad("filter.terminal_eps: must be positive");
    if (!(p->config.mu_max >= 1.0)) bad("filter.mu_max: must be >= 1");
  }
  if (const auto* e = std::get_if<EsfFilter>(&sc.filter)) {
    if (sc.order != 2)
      bad("filter: exponential-safety filter requires n = 2");
    if (!(e->rho > 0.0)) bad("filter.rho: must be positive");
  }

  if (const auto* a = std::get_if<AutoGains>(&sc.gain_policy)) {
    if (!(a->margin > 0.0)) bad("gains.margin: must be positive");
    if (a->c_n < 0.0) bad("gains.c_n: must be >= 0");
  }
  if (const auto* m = std::get_if<ManualGains>(&sc.gain_policy)) {
    if (m->gains.size() != sc.order)
      bad("gains.c: expected " + std::to_string(sc.order) + " gains, got " +
          std::to_string(m->gains.size()));
    else if (!m->gains.c.empty() && m->gains.c.back() < 0.0)
      bad("gains.c: last gain must be >= 0");
  }

  if (std::holds_alternative<TrackingSineNominal>(sc.nominal) &&
      sc.order != 2)
    bad("nominal: tracking_sine is defined for n = 2 only");
  if (const auto* pd = std::get_if<PdSetpointNominal>(&sc.nominal)) {
    if (pd->k.size() != sc.order)
      bad("nominal.k: expected " + std::to_string(sc.order) +
          " gains, got " + std::to_string(pd->k.size()));
  }

  return issues;
}

std::vector<double> chain_rhs(std::span<const double> x, double u) {
  if (x.empty()) throw DomainError("chain_rhs: state must be nonempty");
  std::vector<double> dx(x.size());
  for (std::size_t i = 0; i + 1 < x.size(); ++i) dx[i] = x[i + 1];
  dx.back() = u;
  return dx;
}

Trajectory simulate(const Scenario& sc) {
  if (auto issues = scenario_issues(sc); !issues.empty())
    throw ScenarioError(std::move(issues));

  const auto* ptsf_choice = std::get_if<PtsfFilter>(&sc.filter);
  const double mu_max = ptsf_choice ? ptsf_choice->config.mu_max : 1000.0;
  const HorizonClock clock(sc.t0, sc.horizon, mu_max);
  const double terminal = clock.terminal_time();

  std::optional<GainVector> gains;
  if (ptsf_choice) gains = resolve_gains(sc, clock);

  std::optional<double> x1_at_T;
  double capture_time = 0.0;

  auto decide = [&](std::span<const double> x, double t) -> FilterDecision {
    const double u_nom = evaluate_nominal(sc.nominal, x, t);
    if (ptsf_choice) {
      if (x1_at_T && t >= capture_time) {
        FilterDecision d;
        d.u_nom = u_nom;
        d.u = u_nom * ramp_g(t, *x1_at_T, clock, ptsf_choice->config);
        d.alpha_n = kNaN;
        return d;
      }
      // Pre-terminal, plus the stage points a step can place at or past
      // t0+T before the terminal sample is recorded: the clipped stack
      // keeps the bound finite there.
      return min_filter_decision(u_nom, barrier_alpha_n(x, t, clock, *gains));
    }
    if (const auto* esf = std::get_if<EsfFilter>(&sc.filter))
      return esf_control(u_nom, x, esf->rho);
    FilterDecision d;
    d.u = d.u_nom = u_nom;
    d.alpha_n = kNaN;
    return d;
  };

  // Fills the decision and the barrier columns of one sample, evaluating
  // the stack once when it serves both.
  auto record_sample = [&](std::span<const double> x, double t,
                           TrajectorySample& s) {
    if (ptsf_choice && !(x1_at_T && t >= capture_time)) {
      BarrierStack stack = barrier_stack(x, t, clock, *gains);
      const FilterDecision dec = min_filter_decision(
          evaluate_nominal(sc.nominal, x, t), stack.alpha_n());
      s.u = dec.u;
      s.u_nom = dec.u_nom;
      s.safe_bound = dec.alpha_n;
      s.override_active = dec.override_active;
      s.h = std::move(stack.h);
      s.mu_clipped = stack.mu2_clipped;
      return;
    }
    const FilterDecision dec = decide(x, t);
    s.u = dec.u;
    s.u_nom = dec.u_nom;
    s.safe_bound = dec.alpha_n;
    s.override_active = dec.override_active;
    if (ptsf_choice) {
      BarrierStack stack = barrier_stack(x, t, clock, *gains);
      s.h = std::move(stack.h);
      s.mu_clipped = stack.mu2_clipped;
      return;
    }
    s.h.assign(sc.order, kNaN);
    s.h[0] = -x[0];
    if (const auto* esf = std::get_if<EsfFilter>(&sc.filter))
      s.h[1] = -x[1] + esf->rho * s.h[0];
    s.mu_clipped = false;
  };

  const auto steps =
      static_cast<std::int64_t>(std::llround((sc.t_end - sc.t0) / sc.dt));
  if (steps < 1)
    throw ScenarioError("dt: grid has no steps between t0 and t_end");

  Trajectory traj;
  traj.order = sc.order;
  traj.dt = sc.dt;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);

  std::vector<double> x = sc.x0;
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double t = sc.t0 + static_cast<double>(k) * sc.dt;
    if (!x1_at_T && t >= terminal - kTerminalSlack) {
      x1_at_T = x[0];
      capture_time = t;
    }
    TrajectorySample s;
    s.t = t;
    s.x = x;
    record_sample(x, t, s);
    traj.samples.push_back(std::move(s));

    if (k < steps)
      x = step_rk4(x, t, sc.dt, [&](std::span<const double> xs, double ts) {
        return decide(xs, ts).u;
      });
  }
  return traj;
}

std::vector<std::pair<double, double>> detect_overrides(
    const Trajectory& trajectory) {
  if (trajectory.samples.empty())
    throw DomainError("detect_overrides: empty trajectory");
  std::vector<std::pair<double, double>> intervals;
  bool active = false;
  double start = 0.0;
  for (const auto& s : trajectory.samples) {
    if (s.override_active && !active) {
      active = true;
      start = s.t;
    } else if (!s.override_active && active) {
      active = false;
      intervals.emplace_back(start, s.t);
    }
  }
  if (active)
    intervals.emplace_back(start,
                           trajectory.samples.back().t + trajectory.dt);
  return intervals;
}

double max_abs_jerk_on_override(const Trajectory& trajectory) {
  if (trajectory.order != 2)
    throw UnsupportedOrderError(
        "jerk metric: du/dt equals the jerk of x1 only for n = 2, got n = " +
        std::to_string(trajectory.order));
  if (trajectory.samples.empty())
    throw DomainError("jerk metric: empty trajectory");

  const auto& samples = trajectory.samples;
  const double dt = trajectory.dt;
  double best = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    if (!samples[i].override_active) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < samples.size() && samples[j + 1].override_active) ++j;
    if (j > i) {
      for (std::size_t k = i; k <= j; ++k) {
        double d;
        if (k == i)
          d = (samples[k + 1].u - samples[k].u) / dt;
        else if (k == j)
          d = (samples[k].u - samples[k - 1].u) / dt;
        else
          d = (samples[k + 1].u - samples[k - 1].u) / (2.0 * dt);
        best = std::max(best, std::abs(d));
      }
    }
    i = j + 1;
  }
  return best;
}

Metrics compute_metrics(const Trajectory& trajectory,
                        const HorizonClock& clock) {
  if (trajectory.samples.empty())
    throw DomainError("compute_metrics: empty trajectory");

  const double terminal = clock.terminal_time();
  Metrics m;
  m.min_h1 = std::numeric_limits<double>::infinity();
  m.min_y_margin = -std::numeric_limits<double>::infinity();
  m.max_abs_u = 0.0;
  m.x1_at_T = kNaN;
  bool terminal_seen = false;

  for (const auto& s : trajectory.samples) {
    if (s.t < terminal - kTerminalSlack) {
      m.min_h1 = std::min(m.min_h1, s.h[0]);
      m.min_y_margin = std::max(m.min_y_margin, s.x[0]);
      m.max_abs_u = std::max(m.max_abs_u, std::abs(s.u));
    } else if (!terminal_seen) {
      terminal_seen = true;
      m.x1_at_T = s.x[0];
    }
  }
  m.override_intervals = detect_overrides(trajectory);
  if (trajectory.order == 2)
    m.max_abs_jerk_on_override = max_abs_jerk_on_override(trajectory);
  return m;
}

ComparisonReport compare_filters(const Scenario& base,
                                 const std::vector<FilterChoice>& variants) {
  ComparisonReport report;
  report.variants.reserve(variants.size());
  for (const auto& choice : variants) {
    Scenario sc = base;
    sc.filter = choice;
    FilterVariantResult result;
    result.label = filter_label(choice);
    result.filter = choice;
    result.trajectory = simulate(sc);
    const double mu_max = std::holds_alternative<PtsfFilter>(choice)
                              ? std::get<PtsfFilter>(choice).config.mu_max
                              : 1000.0;
    const HorizonClock clock(sc.t0, sc.horizon, mu_max);
    result.metrics = compute_metrics(result.trajectory, clock);
    report.variants.push_back(std::move(result));
  }
  return report;
}

ComparisonReport compare_scenarios(std::span<const Scenario> variants) {
  if (variants.empty())
    throw ScenarioError("compare: need at least one scenario");
  const Scenario& base = variants.front();
  for (const Scenario& sc : variants) {
    if (sc.order != base.order || sc.x0 != base.x0)
      throw ScenarioError(
          "compare: variants must share the order and initial state");
    if (!(sc.nominal == base.nominal))
      throw ScenarioError(
          "compare: variants must share the nominal controller");
    if (sc.dt != base.dt)
      throw ScenarioError("compare: variants must share the step size");
  }
  ComparisonReport report;
  report.variants.reserve(variants.size());
  for (const Scenario& sc : variants) {
    FilterVariantResult result;
    result.label = sc.name;
    result.filter = sc.filter;
    result.trajectory = simulate(sc);
    const auto* p = std::get_if<PtsfFilter>(&sc.filter);
    const HorizonClock clock(sc.t0, sc.horizon,
                             p ? p->config.mu_max : 1000.0);
    result.metrics = compute_metrics(result.trajectory, clock);
    report.variants.push_back(std::move(result));
  }
  return report;
}

}  // namespace ptsf
