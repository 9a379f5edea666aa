#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ptsf/backstepping.hpp"
#include "ptsf/errors.hpp"
#include "ptsf/simulator.hpp"

using namespace ptsf;

namespace {

Scenario sine_tracking_scenario() {
  Scenario sc;
  sc.name = "sine_tracking";
  sc.order = 2;
  sc.x0 = {-4.0, 2.0};
  sc.t0 = 0.0;
  sc.horizon = 4.0;
  sc.gain_policy = ManualGains{GainVector{{0.6, 0.6}}};
  sc.filter = PtsfFilter{};
  TrackingSineNominal nominal;
  nominal.omega = std::numbers::pi / 2.0;
  sc.nominal = nominal;
  sc.dt = 1e-3;
  sc.t_end = 6.0;
  return sc;
}

Trajectory synthetic_trajectory(const std::vector<bool>& flags,
                                double u_value) {
  Trajectory traj;
  traj.order = 2;
  traj.dt = 1e-3;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    TrajectorySample s;
    s.t = static_cast<double>(k) * traj.dt;
    s.x = {-1.0, 0.0};
    s.h = {1.0, 1.0};
    s.u = u_value;
    s.u_nom = u_value;
    s.safe_bound = u_value;
    s.override_active = flags[k];
    traj.samples.push_back(std::move(s));
  }
  return traj;
}

}  // namespace

TEST_CASE("chain right-hand side shifts the state and appends the input") {
  CHECK(chain_rhs({{-4.0, 2.0}}, 0.24) == std::vector<double>{2.0, 0.24});
  CHECK(chain_rhs({{0.0, 0.0, 0.0}}, 1.0) ==
        std::vector<double>{0.0, 0.0, 1.0});
  CHECK(chain_rhs({{1.0, 2.0, 3.0}}, -1.0) ==
        std::vector<double>{2.0, 3.0, -1.0});
}

TEST_CASE("RK4 step is exact on polynomial flows") {
  auto zero = [](std::span<const double>, double) { return 0.0; };
  const auto drift = step_rk4(std::vector<double>{0.0, 1.0}, 0.0, 0.1, zero);
  CHECK(drift[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(drift[1] == 1.0);

  auto unit = [](std::span<const double>, double) { return 1.0; };
  const auto pushed = step_rk4(std::vector<double>{0.0, 0.0}, 0.0, 0.1, unit);
  CHECK(pushed[0] == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(pushed[1] == doctest::Approx(0.1).epsilon(1e-15));

  CHECK_THROWS_AS(step_rk4(std::vector<double>{0.0}, 0.0, 0.0, zero),
                  DomainError);

  auto broken = [](std::span<const double>, double) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_WITH_AS(
      step_rk4(std::vector<double>{1.0, 2.0}, 0.5, 0.1, broken),
      doctest::Contains("t=0.5"), NumericError);
}

TEST_CASE("free double integrator crosses the barrier unimpeded") {
  Scenario sc;
  sc.order = 2;
  sc.x0 = {-4.0, 2.0};
  sc.horizon = 4.0;
  sc.t_end = 4.0;
  sc.dt = 1e-3;
  sc.filter = NoFilter{};
  sc.nominal = ConstantNominal{0.0};

  const Trajectory traj = simulate(sc);
  REQUIRE(traj.samples.size() == 4001);
  // x1(t) = -4 + 2t crosses zero at t = 2.
  CHECK(std::abs(traj.samples[2000].x[0]) <= 1e-9);
  CHECK(traj.samples[1999].x[0] < 0.0);
  CHECK(traj.samples[2001].x[0] > 0.0);
  CHECK(traj.samples[2000].h[0] == -traj.samples[2000].x[0]);
  CHECK(std::isnan(traj.samples[0].h[1]));
  CHECK(std::isnan(traj.samples[0].safe_bound));

  const Metrics m = compute_metrics(traj, HorizonClock(0.0, 4.0));
  CHECK(m.override_intervals.empty());
  CHECK(m.max_abs_jerk_on_override == 0.0);
}

TEST_CASE("forced override keeps every barrier positive") {
  Scenario sc = sine_tracking_scenario();
  sc.nominal = ConstantNominal{10.0};
  const Trajectory traj = simulate(sc);

  CHECK(traj.samples.front().override_active);
  for (const auto& s : traj.samples) {
    if (s.t >= sc.horizon - 1e-9) break;
    if (s.t <= 3.5) {
      for (double h : s.h) CHECK(h > 0.0);
    } else {
      // By now the barriers have decayed to ~1e-30, far below what the
      // state representation resolves; only gross sign violations count.
      for (double h : s.h) CHECK(h > -1e-12);
    }
  }
  // The run lands on the barrier, so the hand-off ramp engages: u(T) = 0.
  const auto& at_T = traj.samples[4000];
  CHECK(at_T.t == 4.0);
  CHECK(std::abs(at_T.x[0]) <= 1e-3);
  CHECK(at_T.u == 0.0);
  CHECK(std::isnan(at_T.safe_bound));

  const double alpha_at_start = barrier_alpha_n(
      sc.x0, 0.0, HorizonClock(0.0, 4.0, 1000.0), GainVector{{0.6, 0.6}});
  double max_u = 0.0;
  for (const auto& s : traj.samples) max_u = std::max(max_u, std::abs(s.u));
  CHECK(max_u <= 10.0 * (10.0 + std::abs(alpha_at_start)));
}

TEST_CASE("shifting the initialization time shifts the run unchanged") {
  Scenario sc = sine_tracking_scenario();
  sc.nominal = ConstantNominal{10.0};  // time-invariant forcing
  sc.t_end = 5.0;
  const Trajectory base = simulate(sc);

  sc.t0 = 7.5;
  sc.t_end = 12.5;
  const Trajectory shifted = simulate(sc);

  REQUIRE(base.samples.size() == shifted.samples.size());
  for (std::size_t k = 0; k < base.samples.size(); k += 250) {
    const auto& a = base.samples[k];
    const auto& b = shifted.samples[k];
    CHECK(b.t == doctest::Approx(a.t + 7.5).epsilon(1e-12));
    for (std::size_t i = 0; i < a.x.size(); ++i)
      CHECK(b.x[i] == doctest::Approx(a.x[i]).epsilon(1e-9).scale(1.0));
    CHECK(b.override_active == a.override_active);
  }
  CHECK(shifted.samples[4000].u == 0.0);  // ramp still engages at t0 + T
}

TEST_CASE("first-order chain rides its single barrier") {
  Scenario sc;
  sc.order = 1;
  sc.x0 = {-1.0};
  sc.horizon = 1.0;
  sc.t_end = 1.0;
  sc.gain_policy = AutoGains{0.1, 0.5};
  sc.filter = PtsfFilter{};
  sc.nominal = ConstantNominal{5.0};
  sc.dt = 1e-4;

  const Trajectory traj = simulate(sc);
  CHECK(traj.samples.front().override_active);
  for (const auto& s : traj.samples) {
    if (s.t > sc.horizon - 0.5 * sc.dt) break;
    CHECK(s.h[0] > 0.0);
    CHECK(s.x[0] < 0.0);
  }
}

TEST_CASE("sine-tracking scenario stays safe and the control stays bounded") {
  const Scenario sc = sine_tracking_scenario();
  const Trajectory traj = simulate(sc);
  REQUIRE(traj.samples.size() == 6001);

  double max_u_nom = 0.0;
  for (const auto& s : traj.samples) {
    if (s.t < sc.horizon - 1e-9) CHECK(s.x[0] < 0.0);
    max_u_nom = std::max(max_u_nom, std::abs(s.u_nom));
  }
  const Metrics m = compute_metrics(traj, HorizonClock(0.0, 4.0));
  CHECK(m.min_h1 > 0.0);
  CHECK(m.min_y_margin < 0.0);
  CHECK(m.min_y_margin == -m.min_h1);

  // The sine reference is unsafe only on a window well inside the horizon:
  // the filter rides the barrier to within 0.05 there, then hands back to
  // the nominal once it turns safe, which pulls the state away from the
  // barrier before T.
  CHECK(m.min_y_margin > -0.05);
  REQUIRE(m.override_intervals.size() == 1);
  CHECK(m.override_intervals[0].second < 4.0);
  CHECK(m.x1_at_T < -0.1);

  const double alpha_at_start =
      barrier_stack(sc.x0, 0.0, HorizonClock(0.0, 4.0, 1000.0),
                    GainVector{{0.6, 0.6}})
          .alpha_n();
  CHECK(m.max_abs_u <= 10.0 * (max_u_nom + std::abs(alpha_at_start)));
}

TEST_CASE("simulation is deterministic") {
  const Scenario sc = sine_tracking_scenario();
  const Trajectory a = simulate(sc);
  const Trajectory b = simulate(sc);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    CHECK(a.samples[k].t == b.samples[k].t);
    CHECK(a.samples[k].x == b.samples[k].x);
    CHECK(a.samples[k].u == b.samples[k].u);
    CHECK(a.samples[k].h == b.samples[k].h);
    CHECK(a.samples[k].override_active == b.samples[k].override_active);
  }
}

TEST_CASE("override interval detection") {
  SUBCASE("no overrides") {
    const auto traj = synthetic_trajectory(std::vector<bool>(100, false), 0.0);
    CHECK(detect_overrides(traj).empty());
  }
  SUBCASE("a run of samples maps to a closed-open interval") {
    std::vector<bool> flags(3000, false);
    for (int k = 1000; k < 2000; ++k) flags[k] = true;
    const auto intervals = detect_overrides(synthetic_trajectory(flags, 0.0));
    REQUIRE(intervals.size() == 1);
    CHECK(intervals[0].first == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(intervals[0].second == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("an override running to the end closes one step past it") {
    std::vector<bool> flags(100, false);
    for (int k = 90; k < 100; ++k) flags[k] = true;
    const auto intervals = detect_overrides(synthetic_trajectory(flags, 0.0));
    REQUIRE(intervals.size() == 1);
    CHECK(intervals[0].second == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("empty trajectories are rejected") {
    CHECK_THROWS_AS(detect_overrides(Trajectory{}), DomainError);
  }
}

TEST_CASE("jerk metric") {
  SUBCASE("constant command on the override interval has zero jerk") {
    std::vector<bool> flags(100, false);
    for (int k = 20; k < 60; ++k) flags[k] = true;
    const auto traj = synthetic_trajectory(flags, 3.0);
    CHECK(max_abs_jerk_on_override(traj) == 0.0);
  }
  SUBCASE("ramping command reports its slope") {
    std::vector<bool> flags(10, true);
    auto traj = synthetic_trajectory(flags, 0.0);
    for (std::size_t k = 0; k < traj.samples.size(); ++k)
      traj.samples[k].u = 5.0 * traj.samples[k].t;
    CHECK(max_abs_jerk_on_override(traj) ==
          doctest::Approx(5.0).epsilon(1e-9));
  }
  SUBCASE("only the double integrator has a jerk reading") {
    Trajectory traj;
    traj.order = 3;
    traj.dt = 1e-3;
    traj.samples.push_back({});
    CHECK_THROWS_AS(max_abs_jerk_on_override(traj), UnsupportedOrderError);

    traj.samples[0].t = 0.0;
    traj.samples[0].x = {-1.0, 0.0, 0.0};
    traj.samples[0].h = {1.0, 1.0, 1.0};
    const Metrics m = compute_metrics(traj, HorizonClock(0.0, 1e-4));
    CHECK_FALSE(m.max_abs_jerk_on_override.has_value());
  }
}

TEST_CASE("filter comparison") {
  Scenario sc = sine_tracking_scenario();
  sc.t_end = 5.5;

  SUBCASE("single variant") {
    const ComparisonReport report =
        compare_filters(sc, {FilterChoice{EsfFilter{0.6}}});
    REQUIRE(report.variants.size() == 1);
    CHECK(report.variants[0].label == "esf:0.6");
  }
  SUBCASE("the three comparison variants share the grid") {
    const ComparisonReport report = compare_filters(
        sc, {FilterChoice{PtsfFilter{}}, FilterChoice{EsfFilter{0.6}},
             FilterChoice{EsfFilter{3.2}}});
    REQUIRE(report.variants.size() == 3);
    CHECK(report.variants[0].label == "ptsf");
    for (const auto& variant : report.variants) {
      REQUIRE(variant.trajectory.samples.size() ==
              report.variants[0].trajectory.samples.size());
      CHECK(variant.metrics.min_h1 > 0.0);
    }
    // The prescribed-time run gets closest to the barrier.
    CHECK(report.variants[0].metrics.min_y_margin > -0.05);
    // The slow exponential run is the most conservative one.
    CHECK(report.variants[1].metrics.min_y_margin <
          report.variants[0].metrics.min_y_margin);
  }
  SUBCASE("scenario-level comparison rejects mismatched initial states") {
    Scenario other = sc;
    other.name = "shifted";
    other.x0 = {-3.0, 2.0};
    const std::vector<Scenario> variants = {sc, other};
    CHECK_THROWS_AS(compare_scenarios(variants), ScenarioError);
  }
  SUBCASE("scenario-level comparison accepts aligned variants") {
    Scenario esf = sc;
    esf.name = "esf";
    esf.filter = EsfFilter{0.6};
    const std::vector<Scenario> variants = {sc, esf};
    const ComparisonReport report = compare_scenarios(variants);
    REQUIRE(report.variants.size() == 2);
    CHECK(report.variants[1].label == "esf");
  }
}

TEST_CASE("scenario invariants are rejected with key paths") {
  Scenario sc = sine_tracking_scenario();
  SUBCASE("unsafe initial state with a filter enabled") {
    sc.x0 = {1.0, 0.0};
    CHECK_THROWS_WITH_AS(simulate(sc), doctest::Contains("x0[0]"),
                         ScenarioError);
  }
  SUBCASE("state size must match the order") {
    sc.x0 = {-4.0};
    CHECK_THROWS_AS(simulate(sc), ScenarioError);
  }
  SUBCASE("t_end must reach the terminal time") {
    sc.t_end = 3.0;
    CHECK_THROWS_WITH_AS(simulate(sc), doctest::Contains("t_end"),
                         ScenarioError);
  }
  SUBCASE("exponential filter needs a double integrator") {
    sc.order = 3;
    sc.x0 = {-4.0, 2.0, 0.0};
    sc.filter = EsfFilter{0.6};
    sc.gain_policy = AutoGains{};
    sc.nominal = ConstantNominal{0.0};
    CHECK_FALSE(scenario_issues(sc).empty());
  }
  SUBCASE("manual gains failing validation are rejected") {
    sc.gain_policy = ManualGains{GainVector{{0.4, 0.0}}};
    CHECK_THROWS_WITH_AS(simulate(sc), doctest::Contains("gains"),
                         ScenarioError);
  }
}

TEST_CASE("barrier columns follow the active filter") {
  SUBCASE("exponential filter records its own barrier pair") {
    Scenario sc = sine_tracking_scenario();
    sc.filter = EsfFilter{0.6};
    sc.t_end = 4.1;
    const Trajectory traj = simulate(sc);
    const auto& s = traj.samples[1234];
    CHECK(s.h[0] == -s.x[0]);
    CHECK(s.h[1] == doctest::Approx(-s.x[1] + 0.6 * -s.x[0]).epsilon(1e-14));
    CHECK_FALSE(s.mu_clipped);
  }
  SUBCASE("clip flag raises once the blow-up gain saturates") {
    Scenario sc = sine_tracking_scenario();
    sc.nominal = ConstantNominal{10.0};
    const Trajectory traj = simulate(sc);
    // mu_2 = (T/(T-t))^2 crosses 1000 at t = T (1 - 1/sqrt(1000)) ~ 3.874.
    CHECK_FALSE(traj.samples[3000].mu_clipped);
    CHECK(traj.samples[3900].mu_clipped);
  }
}

TEST_CASE("fifth-order chain holds an adversarial nominal") {
  Scenario sc;
  sc.order = 5;
  sc.x0 = {-2.0, 0.3, -0.2, 0.1, 0.0};
  sc.horizon = 1.0;
  sc.t_end = 1.0;
  sc.gain_policy = AutoGains{0.1, 0.1};
  PtsfFilter filter;
  filter.config.mu_max = 100.0;
  sc.filter = filter;
  sc.nominal = ConstantNominal{5.0};
  sc.dt = 1e-4;

  const Trajectory traj = simulate(sc);
  REQUIRE(traj.samples.front().h.size() == 5);
  for (const auto& s : traj.samples) {
    if (s.t > sc.horizon - 0.5 * sc.dt) break;
    for (double h : s.h) CHECK(h > 0.0);
  }
}

TEST_CASE("pd setpoint nominal regulates the first state") {
  Scenario sc;
  sc.order = 2;
  sc.x0 = {-4.0, 0.0};
  sc.horizon = 1.0;
  sc.t_end = 12.0;
  sc.filter = NoFilter{};
  sc.nominal = PdSetpointNominal{{4.0, 4.0}, -1.0};
  sc.dt = 1e-3;

  const Trajectory traj = simulate(sc);
  CHECK(evaluate_nominal(sc.nominal, std::vector<double>{-1.0, 0.0}, 0.0) ==
        0.0);
  CHECK(traj.samples.back().x[0] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("randomized safety sweep (reduced)") {
  // Same construction as the acceptance sweep, fewer draws: adversarial
  // constant nominal, auto gains, per-draw clip ceiling and step size
  // keeping c_max * mu_max * dt inside the explicit-integration stability
  // region.
  std::mt19937 rng(61);
  std::uniform_int_distribution<int> n_dist(2, 4);
  std::uniform_real_distribution<double> x1_dist(-10.0, -0.1);
  std::uniform_real_distribution<double> xk_dist(-5.0, 5.0);

  int accepted = 0;
  while (accepted < 30) {
    const int n = n_dist(rng);
    std::vector<double> x0(n);
    x0[0] = x1_dist(rng);
    for (int i = 1; i < n; ++i) x0[i] = xk_dist(rng);

    const HorizonClock probe(0.0, 1.0, 1000.0);
    GainSelection sel;
    try {
      sel = select_gains_detailed(x0, probe, 0.1, 0.1);
    } catch (const DegenerateBarrierError&) {
      continue;
    }
    const double c_max =
        *std::max_element(sel.gains.c.begin(), sel.gains.c.end());
    if (c_max > 2e4) continue;  // stiffness beyond the fixed-grid budget

    Scenario sc;
    sc.order = static_cast<std::size_t>(n);
    sc.x0 = x0;
    sc.horizon = 1.0;
    sc.t_end = 1.0;
    sc.gain_policy = AutoGains{0.1, 0.1};
    PtsfFilter filter;
    filter.config.mu_max = std::min(1000.0, std::max(1.0, 5e4 / c_max));
    sc.filter = filter;
    sc.nominal = ConstantNominal{10.0};
    sc.dt = std::min(1e-3, 1.0 / (c_max * filter.config.mu_max));

    const Trajectory traj = simulate(sc);
    for (const auto& s : traj.samples) {
      if (s.t > sc.horizon - 0.5 * sc.dt) break;
      CHECK(s.x[0] < 0.0);
      for (double h : s.h) CHECK(h > 0.0);
    }
    ++accepted;
  }
}
