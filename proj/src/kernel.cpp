#include "ptsf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptsf/errors.hpp"

namespace ptsf {

namespace {

// Integer power by repeated multiplication; keeps mu exact at representable
// times instead of routing through exp/log.
double ipow(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace

HorizonClock::HorizonClock(double t0, double horizon, double mu_max)
    : t0_(t0), horizon_(horizon), mu_max_(mu_max) {
  require(horizon > 0.0, "HorizonClock: horizon must be positive");
  require(mu_max >= 1.0, "HorizonClock: mu_max must be >= 1");
}

double HorizonClock::elapsed(double t) const {
  require(t >= t0_, "HorizonClock::elapsed: t before initialization time");
  return t - t0_;
}

double nu(double t_rel, double horizon) {
  require(horizon > 0.0, "nu: horizon must be positive");
  require(t_rel >= 0.0 && t_rel <= horizon,
          "nu: t_rel outside [0, T], t_rel=" + std::to_string(t_rel));
  return (horizon - t_rel) / horizon;
}

double mu(int m, double t_rel, double horizon) {
  require(m >= 1, "mu: order m must be >= 1");
  require(horizon > 0.0, "mu: horizon must be positive");
  require(t_rel >= 0.0 && t_rel < horizon,
          "mu: t_rel outside [0, T), t_rel=" + std::to_string(t_rel) +
              " T=" + std::to_string(horizon));
  return 1.0 / ipow(nu(t_rel, horizon), m);
}

double mu_clipped(int m, double t_rel, double horizon, double mu_max) {
  require(m >= 1, "mu_clipped: order m must be >= 1");
  require(horizon > 0.0, "mu_clipped: horizon must be positive");
  require(t_rel >= 0.0, "mu_clipped: t_rel must be >= 0");
  require(mu_max >= 1.0, "mu_clipped: mu_max must be >= 1");
  if (t_rel >= horizon) return mu_max;
  return std::min(mu(m, t_rel, horizon), mu_max);
}

bool mu_clip_active(int m, double t_rel, double horizon, double mu_max) {
  require(m >= 1, "mu_clip_active: order m must be >= 1");
  require(horizon > 0.0, "mu_clip_active: horizon must be positive");
  require(t_rel >= 0.0, "mu_clip_active: t_rel must be >= 0");
  require(mu_max >= 1.0, "mu_clip_active: mu_max must be >= 1");
  if (t_rel >= horizon) return true;
  return mu(m, t_rel, horizon) >= mu_max;
}

std::int64_t rising_factorial(int m, int k) {
  require(m >= 1, "rising_factorial: m must be >= 1");
  require(k >= 0, "rising_factorial: k must be >= 0");
  std::int64_t out = 1;
  for (int j = 0; j < k; ++j) out *= m + j;
  return out;
}

double mu_derivative(int m, int i, double t_rel, double horizon) {
  require(i >= 0, "mu_derivative: derivative order must be >= 0");
  const double factor =
      static_cast<double>(rising_factorial(m, i)) / ipow(horizon, i);
  return factor * mu(m + i, t_rel, horizon);
}

bool check_mu_commutativity(int m, double t_mid, double t, double horizon,
                            double tol) {
  require(t_mid >= 0.0 && t_mid <= t && t < horizon,
          "check_mu_commutativity: need 0 <= t_mid <= t < T");
  const double lhs = mu(m, t, horizon);
  const double rhs = mu(m, t_mid, horizon) * mu(m, t - t_mid, horizon - t_mid);
  return std::abs(lhs - rhs) <= tol * lhs;
}

double xi(double c, double t_rel, double horizon) {
  require(c > 0.0, "xi: rate c must be positive");
  return std::exp(-c * horizon * (mu(1, t_rel, horizon) - 1.0));
}

}  // namespace ptsf
