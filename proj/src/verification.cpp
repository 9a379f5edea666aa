#include "ptsf/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ptsf/backstepping.hpp"
#include "ptsf/filter.hpp"
#include "ptsf/format.hpp"
#include "ptsf/kernel.hpp"
#include "ptsf/simulator.hpp"

namespace ptsf {

namespace {

struct Failure {
  std::string what;
};

using CheckFn = std::optional<Failure> (*)();

CheckResult run_check(const std::string& name, CheckFn fn) {
  CheckResult result;
  result.name = name;
  try {
    const auto failure = fn();
    result.passed = !failure.has_value();
    if (failure) result.detail = failure->what;
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  return result;
}

// --- kernel checks ---------------------------------------------------------

std::optional<Failure> check_mu_monotone() {
  for (int m = 1; m <= 6; ++m) {
    for (double T : {0.3, 1.0, 4.0, 9.7}) {
      double prev = 0.0;
      for (int i = 0; i < 400; ++i) {
        const double t = T * static_cast<double>(i) / 401.0;
        const double value = mu(m, t, T);
        if (value < 1.0 || value < prev)
          return Failure{"mu(" + std::to_string(m) + ", " +
                         format_shortest(t) + ", " + format_shortest(T) +
                         ") = " + format_shortest(value) +
                         " breaks monotonicity"};
        prev = value;
      }
    }
  }
  return std::nullopt;
}

std::optional<Failure> check_mu_semigroup() {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> m_dist(2, 6);
  std::uniform_real_distribution<double> T_dist(0.1, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = m_dist(rng);
    const double T = T_dist(rng);
    const double t = unit(rng) * T * 0.999999;
    const double t_mid = unit(rng) * t;
    if (!check_mu_commutativity(m, t_mid, t, T, 1e-10))
      return Failure{"semigroup identity failed at m=" + std::to_string(m) +
                     " t_mid=" + format_shortest(t_mid) +
                     " t=" + format_shortest(t) + " T=" + format_shortest(T)};
  }
  return std::nullopt;
}

std::optional<Failure> check_mu_derivative_recurrence() {
  std::mt19937 rng(43);
  std::uniform_int_distribution<int> m_dist(1, 6);
  std::uniform_real_distribution<double> T_dist(0.5, 8.0);
  std::uniform_real_distribution<double> frac(0.02, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = m_dist(rng);
    const double T = T_dist(rng);
    const double t = frac(rng) * T;
    const double h = 1e-3 * T * nu(t, T);
    for (int order = 1; order <= 3; ++order) {
      auto f = [&](double at) { return mu_derivative(m, order - 1, at, T); };
      const double fd =
          (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) /
          (12 * h);
      const double exact = mu_derivative(m, order, t, T);
      if (std::abs(fd - exact) > 1e-6 * std::abs(exact))
        return Failure{"derivative order " + std::to_string(order) +
                       " mismatch at m=" + std::to_string(m) +
                       " t=" + format_shortest(t) +
                       " T=" + format_shortest(T) +
                       ": fd=" + format_shortest(fd) +
                       " exact=" + format_shortest(exact)};
    }
  }
  return std::nullopt;
}

std::optional<Failure> check_soft_landing_envelope() {
  for (double c : {0.5, 1.0, 3.0}) {
    for (double T : {1.0, 4.0}) {
      for (int k = 0; k <= 6; ++k) {
        double prev = std::numeric_limits<double>::infinity();
        double first = 0.0;
        for (int j = 1; j <= 6; ++j) {
          const double t = T * (1.0 - std::pow(10.0, -j));
          double product = xi(c, t, T);
          for (int p = 0; p < k; ++p) product *= mu(1, t, T);
          if (j == 1) first = product;
          if (product > prev)
            return Failure{"mu^" + std::to_string(k) +
                           " * xi grew from step " + std::to_string(j - 1) +
                           " to " + std::to_string(j) + " at c=" +
                           format_shortest(c) + " T=" + format_shortest(T)};
          prev = product;
        }
        if (prev > 1e-6 * std::max(first, 1.0))
          return Failure{"mu^" + std::to_string(k) +
                         " * xi did not decay toward 0 (final " +
                         format_shortest(prev) + ")"};
      }
    }
  }
  return std::nullopt;
}

// --- backstepping checks ---------------------------------------------------

std::optional<Failure> check_gain_positivity_equivalence() {
  std::mt19937 rng(44);
  std::uniform_int_distribution<int> n_dist(2, 5);
  std::uniform_real_distribution<double> x1_dist(-10.0, -0.1);
  std::uniform_real_distribution<double> xk_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> T_dist(0.5, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = n_dist(rng);
    std::vector<double> x0(n);
    x0[0] = x1_dist(rng);
    for (int i = 1; i < n; ++i) x0[i] = xk_dist(rng);
    const HorizonClock clock(0.0, T_dist(rng));

    const GainSelection sel = select_gains_detailed(x0, clock, 0.1, 0.3);
    if (!validate_gains(sel.gains, x0, clock))
      return Failure{"margin-policy gains rejected for x0=" +
                     format_state(x0)};

    // Dipping any stage below its raw bound must break positivity at the
    // next stage: h_{i+1}(t0) = (c_i - bound_i) h_i(t0).
    for (int stage = 0; stage + 1 < n; ++stage) {
      GainVector low = sel.gains;
      low.c[stage] = sel.lower_bounds[stage] - 0.05;
      if (validate_gains(low, x0, clock))
        return Failure{"gain below its stage-" + std::to_string(stage + 1) +
                       " bound accepted for x0=" + format_state(x0)};
    }

    GainVector negative_last = sel.gains;
    negative_last.c.back() = -0.1;
    if (validate_gains(negative_last, x0, clock))
      return Failure{"negative last gain accepted"};
  }
  return std::nullopt;
}

// Chain flow with u = 0 is polynomial and exact; the states a virtual
// control of stage i <= n-1 reads never feel the input over the stencil.
std::vector<double> chain_flow(std::span<const double> x, double h) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double term = 0.0;
    double hk = 1.0;
    double fact = 1.0;
    for (std::size_t k = 0; j + k < n; ++k) {
      if (k > 0) {
        hk *= h;
        fact *= static_cast<double>(k);
      }
      term += x[j + k] * hk / fact;
    }
    out[j] = term;
  }
  return out;
}

std::optional<Failure> check_jet_flow_consistency() {
  std::mt19937 rng(45);
  std::uniform_int_distribution<int> n_dist(2, 5);
  std::uniform_real_distribution<double> x_dist(-3.0, 3.0);
  std::uniform_real_distribution<double> T_dist(1.0, 5.0);
  std::uniform_real_distribution<double> gain_dist(0.1, 2.0);
  std::uniform_real_distribution<double> frac(0.0, 0.7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = n_dist(rng);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = x_dist(rng);
    const double T = T_dist(rng);
    const HorizonClock clock(0.0, T, 1e12);
    GainVector gains;
    for (int i = 0; i < n; ++i) gains.c.push_back(gain_dist(rng));
    const double t = frac(rng) * T;
    const double h = 1e-5 * T * nu(t, T);

    const BarrierStack stack = barrier_stack(x, t, clock, gains);
    const BarrierStack fwd =
        barrier_stack(chain_flow(x, h), t + h, clock, gains);
    const BarrierStack bwd =
        barrier_stack(chain_flow(x, -h), t - h, clock, gains);
    for (int i = 0; i + 1 < n; ++i) {
      const double fd = (fwd.alpha[i] - bwd.alpha[i]) / (2 * h);
      const double exact = stack.alpha_jets[i].coeff(1);
      if (std::abs(fd - exact) > 1e-5 * std::max(1.0, std::abs(exact)))
        return Failure{"alpha_" + std::to_string(i + 1) +
                       " jet derivative " + format_shortest(exact) +
                       " vs fd " + format_shortest(fd) + " at t=" +
                       format_shortest(t) + " n=" + std::to_string(n)};
    }
  }
  return std::nullopt;
}

std::optional<Failure> check_closed_loop_cascade() {
  for (int n : {2, 3}) {
    std::vector<double> x0 = {-2.0, 1.0};
    if (n == 3) x0.push_back(0.5);
    const double T = 2.0;
    const HorizonClock clock(0.0, T, 1e9);
    const GainVector gains = select_gains(x0, clock, 0.2, 0.4);

    const double dt = 1e-4;
    const int steps = static_cast<int>(0.8 * T / dt);
    std::vector<std::vector<double>> h_hist;
    std::vector<double> x = x0;
    auto alpha_n_law = [&](std::span<const double> xs, double ts) {
      return barrier_alpha_n(xs, ts, clock, gains);
    };
    for (int k = 0; k <= steps; ++k) {
      const double t = k * dt;
      h_hist.push_back(barrier_stack(x, t, clock, gains).h);
      if (k < steps) x = step_rk4(x, t, dt, alpha_n_law);
    }
    for (int k = 1; k + 1 <= steps; ++k) {
      const double t = k * dt;
      const double mu2 = mu(2, t, T);
      for (int i = 0; i < n; ++i) {
        const double fd = (h_hist[k + 1][i] - h_hist[k - 1][i]) / (2 * dt);
        const double coupling = (i + 1 < n) ? h_hist[k][i + 1] : 0.0;
        const double residual = fd + gains[i] * mu2 * h_hist[k][i] - coupling;
        const double scale = std::max(
            {1.0, std::abs(gains[i] * mu2 * h_hist[k][i]),
             std::abs(coupling)});
        if (std::abs(residual) > 1e-4 * scale)
          return Failure{"cascade residual " + format_shortest(residual) +
                         " for h_" + std::to_string(i + 1) + " at t=" +
                         format_shortest(t) + " n=" + std::to_string(n)};
      }
    }
  }
  return std::nullopt;
}

std::optional<Failure> check_stack_linearity() {
  std::mt19937 rng(47);
  std::uniform_int_distribution<int> n_dist(1, 5);
  std::uniform_real_distribution<double> x_dist(-4.0, 4.0);
  std::uniform_real_distribution<double> a_dist(-3.0, 3.0);
  std::uniform_real_distribution<double> frac(0.0, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = n_dist(rng);
    std::vector<double> x(n), ax(n);
    const double a = a_dist(rng);
    for (int i = 0; i < n; ++i) {
      x[i] = x_dist(rng);
      ax[i] = a * x[i];
    }
    const HorizonClock clock(0.0, 3.0);
    GainVector gains;
    for (int i = 0; i < n; ++i) gains.c.push_back(0.5 + 0.2 * i);
    const double t = frac(rng) * 3.0;
    const BarrierStack s1 = barrier_stack(x, t, clock, gains);
    const BarrierStack s2 = barrier_stack(ax, t, clock, gains);
    for (int i = 0; i < n; ++i) {
      if (std::abs(s2.h[i] - a * s1.h[i]) >
              1e-12 * std::max(1.0, std::abs(a * s1.h[i])) ||
          std::abs(s2.alpha[i] - a * s1.alpha[i]) >
              1e-12 * std::max(1.0, std::abs(a * s1.alpha[i])))
        return Failure{"stack not linear at stage " + std::to_string(i + 1)};
    }
  }
  return std::nullopt;
}

// --- oracle checks ---------------------------------------------------------

std::optional<Failure> check_esf_closed_form_vs_rk4() {
  for (double rho : {0.6, 3.2}) {
    const std::vector<double> x_ov = {-4.0, 2.0};
    const double dt = 1e-3;
    const int steps = 5000;
    std::vector<double> x = x_ov;
    auto overridden = [&](std::span<const double> xs, double) {
      return -(2.0 * rho * rho * xs[0] + 3.0 * rho * xs[1]);
    };
    double max_err = 0.0;
    for (int k = 0; k <= steps; ++k) {
      const auto closed = esf_closed_form(x_ov, rho, k * dt);
      max_err = std::max({max_err, std::abs(closed[0] - x[0]),
                          std::abs(closed[1] - x[1])});
      if (k < steps) x = step_rk4(x, k * dt, dt, overridden);
    }
    if (max_err > 1e-6)
      return Failure{"closed form deviates from integration by " +
                     format_shortest(max_err) + " at rho=" +
                     format_shortest(rho)};
  }
  return std::nullopt;
}

std::optional<Failure> check_overridden_barrier_solution() {
  // Forced override from two start times; while mu_2 stays unclipped the
  // last barrier must follow
  //   h_n(t) = xi(c_n mu_2(t_ov, T), t - t_ov, T - t_ov) h_n(t_ov).
  // The mu_2(t_ov, T) factor restates the original-clock gain on the
  // sub-horizon via the semigroup identity; it is 1 when t_ov = 0.
  for (double t_ov : {0.0, 0.2}) {
    Scenario sc;
    sc.name = "forced-override";
    sc.order = 2;
    sc.x0 = {-1.0, 0.2};
    sc.t0 = 0.0;
    sc.horizon = 1.0;
    sc.gain_policy = ManualGains{GainVector{{0.3, 0.05}}};
    sc.filter = PtsfFilter{};
    const double switch_time = t_ov;
    sc.nominal = ExternalNominal{[switch_time](std::span<const double>,
                                               double t) {
      return t < switch_time ? 0.0 : 10.0;
    }};
    sc.dt = 1e-4;
    sc.t_end = sc.t0 + sc.horizon;
    const Trajectory traj = simulate(sc);

    const auto ov_index =
        static_cast<std::size_t>(std::llround(t_ov / sc.dt));
    if (!traj.samples[ov_index].override_active)
      return Failure{"override not active at its start time " +
                     format_shortest(t_ov)};
    const double h_start = traj.samples[ov_index].h[1];
    const double sub_horizon = sc.horizon - t_ov;
    const double c_n = 0.05;
    const double rate = c_n * mu(2, t_ov, sc.horizon);
    for (std::size_t k = ov_index + 1; k < traj.samples.size(); ++k) {
      const auto& s = traj.samples[k];
      if (s.mu_clipped || s.t >= sc.horizon) break;
      if (!s.override_active)
        return Failure{"override released at t=" + format_shortest(s.t)};
      const double predicted =
          xi(rate, s.t - t_ov, sub_horizon) * h_start;
      if (std::abs(s.h[1] - predicted) > 1e-4 * std::abs(predicted))
        return Failure{"h_2(" + format_shortest(s.t) + ") = " +
                       format_shortest(s.h[1]) + " vs predicted " +
                       format_shortest(predicted) + " (t_ov=" +
                       format_shortest(t_ov) + ")"};
    }
  }
  return std::nullopt;
}

VerificationReport kernel_report() {
  VerificationReport r;
  r.checks.push_back(
      run_check("kernel: mu >= 1 and nondecreasing on sampled grids",
                &check_mu_monotone));
  r.checks.push_back(run_check(
      "kernel: blow-up semigroup identity (1000 draws, rel 1e-10)",
      &check_mu_semigroup));
  r.checks.push_back(run_check(
      "kernel: derivative recurrence vs finite differences (rel 1e-6)",
      &check_mu_derivative_recurrence));
  r.checks.push_back(run_check(
      "kernel: soft-landing envelope dominates mu powers (k <= 6)",
      &check_soft_landing_envelope));
  return r;
}

VerificationReport backstepping_report() {
  VerificationReport r;
  r.checks.push_back(run_check(
      "backstepping: gain bounds match initial barrier positivity",
      &check_gain_positivity_equivalence));
  r.checks.push_back(run_check(
      "backstepping: alpha jet derivatives match flow differences",
      &check_jet_flow_consistency));
  r.checks.push_back(run_check(
      "backstepping: closed-loop barrier cascade holds under u = alpha_n",
      &check_closed_loop_cascade));
  r.checks.push_back(run_check("backstepping: barrier stack is linear in x",
                               &check_stack_linearity));
  return r;
}

VerificationReport oracles_report() {
  VerificationReport r;
  r.checks.push_back(run_check(
      "oracles: exponential-safety closed form matches RK4 (1e-6)",
      &check_esf_closed_form_vs_rk4));
  r.checks.push_back(run_check(
      "oracles: overridden barrier follows its exponential solution",
      &check_overridden_barrier_solution));
  return r;
}

}  // namespace

std::optional<VerifySuite> parse_suite(std::string_view name) {
  if (name == "kernel") return VerifySuite::kernel;
  if (name == "backstepping") return VerifySuite::backstepping;
  if (name == "oracles") return VerifySuite::oracles;
  if (name == "all") return VerifySuite::all;
  return std::nullopt;
}

VerificationReport run_verification_suite(VerifySuite suite) {
  VerificationReport report;
  auto append = [&](VerificationReport part) {
    for (auto& c : part.checks) report.checks.push_back(std::move(c));
  };
  if (suite == VerifySuite::kernel || suite == VerifySuite::all)
    append(kernel_report());
  if (suite == VerifySuite::backstepping || suite == VerifySuite::all)
    append(backstepping_report());
  if (suite == VerifySuite::oracles || suite == VerifySuite::all)
    append(oracles_report());
  return report;
}

}  // namespace ptsf
