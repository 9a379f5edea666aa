#ifndef PTSF_KERNEL_HPP
#define PTSF_KERNEL_HPP

#include <cstdint>

namespace ptsf {

/// Time base shared by every time-varying gain: initialization time t0,
/// horizon length T, and the ceiling at which the blow-up gain is clipped
/// for numerical use near the terminal time.
class HorizonClock {
 public:
  HorizonClock(double t0, double horizon, double mu_max = 1000.0);

  double t0() const { return t0_; }
  double horizon() const { return horizon_; }
  double mu_max() const { return mu_max_; }
  double terminal_time() const { return t0_ + horizon_; }

  /// t - t0. Only valid for t >= t0.
  double elapsed(double t) const;

 private:
  double t0_;
  double horizon_;
  double mu_max_;
};

/// Linear decay factor (T - t_rel)/T: equals 1 at t_rel = 0 and 0 at
/// t_rel = T. Requires 0 <= t_rel <= T.
double nu(double t_rel, double horizon);

/// Blow-up gain 1/nu^m. Strictly increasing in t_rel and unbounded as
/// t_rel -> T; requires 0 <= t_rel < T. Callers that touch the terminal
/// time must use mu_clipped instead.
double mu(int m, double t_rel, double horizon);

/// min{mu(m, t_rel, T), mu_max}; defined for all t_rel >= 0, returning
/// mu_max at and past the terminal time.
double mu_clipped(int m, double t_rel, double horizon, double mu_max);

/// Whether mu_clipped saturates at mu_max at this time.
bool mu_clip_active(int m, double t_rel, double horizon, double mu_max);

/// Rising factorial m(m+1)...(m+k-1); 1 for k = 0.
std::int64_t rising_factorial(int m, int k);

/// i-th time derivative of mu_m: (m rising i / T^i) * mu_{m+i}.
/// i = 0 returns mu_m itself. Requires 0 <= t_rel < T.
double mu_derivative(int m, int i, double t_rel, double horizon);

/// Semigroup identity of the blow-up gain:
///   mu_m(t, T) = mu_m(t_mid, T) * mu_m(t - t_mid, T - t_mid).
/// Returns true iff both sides agree to the given relative tolerance.
/// Requires 0 <= t_mid <= t < T.
bool check_mu_commutativity(int m, double t_mid, double t, double horizon,
                            double tol);

/// Soft-landing envelope exp(-c T (mu_1(t_rel, T) - 1)); equals 1 at
/// t_rel = 0 and decays to 0 faster than any power of mu_1 grows.
/// Requires c > 0 and 0 <= t_rel < T.
double xi(double c, double t_rel, double horizon);

}  // namespace ptsf

#endif  // PTSF_KERNEL_HPP
