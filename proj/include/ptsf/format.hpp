#ifndef PTSF_FORMAT_HPP
#define PTSF_FORMAT_HPP

#include <span>
#include <string>

namespace ptsf {

/// Shortest decimal form that round-trips to the same double.
std::string format_shortest(double value);

/// "[a, b, ...]" with round-trip precision; used in diagnostics.
std::string format_state(std::span<const double> x);

}  // namespace ptsf

#endif  // PTSF_FORMAT_HPP
