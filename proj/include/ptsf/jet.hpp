#ifndef PTSF_JET_HPP
#define PTSF_JET_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ptsf {

/// A value together with its total time derivatives up to a truncation
/// order: coeffs[k] holds the k-th derivative of the carried quantity.
/// Sums, products (Leibniz rule) and derivative shifts are closed under
/// truncation to the smaller order, which is what lets the virtual-control
/// recursion run to arbitrary chain length without symbolic expansion.
class DerivativeJet {
 public:
  explicit DerivativeJet(std::vector<double> coeffs);

  static DerivativeJet zero(std::size_t order);
  static DerivativeJet constant(double value, std::size_t order);

  std::size_t order() const { return coeffs_.size() - 1; }
  double value() const { return coeffs_.front(); }

  /// k-th derivative coefficient; k must not exceed the truncation order.
  double coeff(std::size_t k) const;

  std::span<const double> coeffs() const { return coeffs_; }

  /// Jet of the time derivative: drops coeff(0) and shifts the rest down.
  /// Requires order() >= 1.
  DerivativeJet derivative() const;

  /// Copy truncated to a lower (or equal) order.
  DerivativeJet truncated(std::size_t order) const;

  DerivativeJet scaled(double s) const;

  friend DerivativeJet operator+(const DerivativeJet& a,
                                 const DerivativeJet& b);
  friend DerivativeJet operator-(const DerivativeJet& a,
                                 const DerivativeJet& b);
  /// Leibniz product: (fg)^(k) = sum_j C(k,j) f^(j) g^(k-j), truncated to
  /// the smaller operand order.
  friend DerivativeJet operator*(const DerivativeJet& a,
                                 const DerivativeJet& b);

 private:
  std::vector<double> coeffs_;
};

}  // namespace ptsf

#endif  // PTSF_JET_HPP
