#include "ptsf/jet.hpp"

#include <algorithm>
#include <string>

#include "ptsf/errors.hpp"

namespace ptsf {

DerivativeJet::DerivativeJet(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty())
    throw DepthError("DerivativeJet: need at least the order-0 coefficient");
}

DerivativeJet DerivativeJet::zero(std::size_t order) {
  return DerivativeJet(std::vector<double>(order + 1, 0.0));
}

DerivativeJet DerivativeJet::constant(double value, std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  c[0] = value;
  return DerivativeJet(std::move(c));
}

double DerivativeJet::coeff(std::size_t k) const {
  if (k >= coeffs_.size())
    throw DepthError("DerivativeJet::coeff: derivative order " +
                     std::to_string(k) + " beyond truncation order " +
                     std::to_string(order()));
  return coeffs_[k];
}

DerivativeJet DerivativeJet::derivative() const {
  if (order() == 0)
    throw DepthError("DerivativeJet::derivative: order-0 jet has no "
                     "derivative information");
  return DerivativeJet(
      std::vector<double>(coeffs_.begin() + 1, coeffs_.end()));
}

DerivativeJet DerivativeJet::truncated(std::size_t order) const {
  if (order > this->order())
    throw DepthError("DerivativeJet::truncated: cannot extend order " +
                     std::to_string(this->order()) + " to " +
                     std::to_string(order));
  return DerivativeJet(
      std::vector<double>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

DerivativeJet DerivativeJet::scaled(double s) const {
  std::vector<double> c(coeffs_);
  for (double& v : c) v *= s;
  return DerivativeJet(std::move(c));
}

DerivativeJet operator+(const DerivativeJet& a, const DerivativeJet& b) {
  const std::size_t n = std::min(a.coeffs_.size(), b.coeffs_.size());
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = a.coeffs_[k] + b.coeffs_[k];
  return DerivativeJet(std::move(c));
}

DerivativeJet operator-(const DerivativeJet& a, const DerivativeJet& b) {
  const std::size_t n = std::min(a.coeffs_.size(), b.coeffs_.size());
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = a.coeffs_[k] - b.coeffs_[k];
  return DerivativeJet(std::move(c));
}

DerivativeJet operator*(const DerivativeJet& a, const DerivativeJet& b) {
  const std::size_t n = std::min(a.coeffs_.size(), b.coeffs_.size());
  std::vector<double> c(n, 0.0);
  // Pascal row updated in place: binom[j] = C(k, j) for the current k.
  std::vector<double> binom(n, 0.0);
  binom[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      for (std::size_t j = k; j > 0; --j) binom[j] += binom[j - 1];
    }
    double sum = 0.0;
    for (std::size_t j = 0; j <= k; ++j)
      sum += binom[j] * a.coeffs_[j] * b.coeffs_[k - j];
    c[k] = sum;
  }
  return DerivativeJet(std::move(c));
}

}  // namespace ptsf
