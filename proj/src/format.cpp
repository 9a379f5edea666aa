#include "ptsf/format.hpp"

#include <charconv>
#include <system_error>

namespace ptsf {

std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_state(std::span<const double> x) {
  std::string out = "[";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_shortest(x[i]);
  }
  out += "]";
  return out;
}

}  // namespace ptsf
