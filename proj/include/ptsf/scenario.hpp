#ifndef PTSF_SCENARIO_HPP
#define PTSF_SCENARIO_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ptsf/backstepping.hpp"
#include "ptsf/filter.hpp"

namespace ptsf {

struct PtsfFilter {
  FilterConfig config;
  bool operator==(const PtsfFilter&) const = default;
};

struct EsfFilter {
  double rho = 0.6;
  bool operator==(const EsfFilter&) const = default;
};

struct NoFilter {
  bool operator==(const NoFilter&) const = default;
};

using FilterChoice = std::variant<PtsfFilter, EsfFilter, NoFilter>;

/// Gains derived from the initial state: max{0, bound_i} + margin per
/// stage, with the last gain fixed at c_n.
struct AutoGains {
  double margin = 0.1;
  double c_n = 0.1;
  bool operator==(const AutoGains&) const = default;
};

struct ManualGains {
  GainVector gains;
  bool operator==(const ManualGains&) const = default;
};

using GainPolicy = std::variant<AutoGains, ManualGains>;

/// u_nom = -k1 (x1 + A sin(omega t) + b) - k2 (x2 + A omega cos(omega t));
/// drives the double integrator to track a sinusoid around -b.
struct TrackingSineNominal {
  double k1 = 4.0;
  double k2 = 4.0;
  double amplitude = 1.0;
  double offset = 0.8;
  double omega = 1.0;
  bool operator==(const TrackingSineNominal&) const = default;
};

struct ConstantNominal {
  double value = 0.0;
  bool operator==(const ConstantNominal&) const = default;
};

/// u_nom = -sum_i k_i (x_i - target_i) with target (setpoint, 0, ..., 0).
struct PdSetpointNominal {
  std::vector<double> k;
  double setpoint = 0.0;
  bool operator==(const PdSetpointNominal&) const = default;
};

/// Caller-supplied control law; not representable in scenario files.
struct ExternalNominal {
  std::function<double(std::span<const double>, double)> u;
  bool operator==(const ExternalNominal&) const { return false; }
};

using NominalSpec = std::variant<TrackingSineNominal, ConstantNominal,
                                 PdSetpointNominal, ExternalNominal>;

double evaluate_nominal(const NominalSpec& nominal, std::span<const double> x,
                        double t);

/// Short identifier for a filter choice: "ptsf", "esf:<rho>", "none".
std::string filter_label(const FilterChoice& filter);

/// One simulation experiment: the chain order and initial state, the
/// safety horizon, how gains are fixed, which filter runs, the nominal
/// controller, and the integration grid.
struct Scenario {
  std::string name = "scenario";
  std::string description;
  std::size_t order = 2;
  std::vector<double> x0;
  double t0 = 0.0;
  double horizon = 1.0;
  GainPolicy gain_policy = AutoGains{};
  FilterChoice filter = PtsfFilter{};
  NominalSpec nominal = ConstantNominal{};
  double dt = 1e-3;
  double t_end = 2.0;

  bool operator==(const Scenario&) const = default;
};

}  // namespace ptsf

#endif  // PTSF_SCENARIO_HPP
