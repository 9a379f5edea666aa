#include "ptsf/scenario.hpp"

#include <cmath>

#include "ptsf/errors.hpp"
#include "ptsf/format.hpp"

namespace ptsf {

double evaluate_nominal(const NominalSpec& nominal, std::span<const double> x,
                        double t) {
  return std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, TrackingSineNominal>) {
          if (x.size() < 2)
            throw UnsupportedOrderError(
                "tracking_sine nominal needs a length-2 state");
          const double s = spec.amplitude * std::sin(spec.omega * t);
          const double c =
              spec.amplitude * spec.omega * std::cos(spec.omega * t);
          return -spec.k1 * (x[0] + s + spec.offset) - spec.k2 * (x[1] + c);
        } else if constexpr (std::is_same_v<T, ConstantNominal>) {
          return spec.value;
        } else if constexpr (std::is_same_v<T, PdSetpointNominal>) {
          if (spec.k.size() != x.size())
            throw DomainError("pd_setpoint nominal: gain vector length " +
                              std::to_string(spec.k.size()) +
                              " does not match order " +
                              std::to_string(x.size()));
          double u = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) {
            const double target = (i == 0) ? spec.setpoint : 0.0;
            u -= spec.k[i] * (x[i] - target);
          }
          return u;
        } else {
          if (!spec.u)
            throw DomainError("external nominal: callback not set");
          return spec.u(x, t);
        }
      },
      nominal);
}

std::string filter_label(const FilterChoice& filter) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PtsfFilter>) {
          return "ptsf";
        } else if constexpr (std::is_same_v<T, EsfFilter>) {
          return "esf:" + format_shortest(f.rho);
        } else {
          return "none";
        }
      },
      filter);
}

}  // namespace ptsf
