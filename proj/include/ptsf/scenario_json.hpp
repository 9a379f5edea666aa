#ifndef PTSF_SCENARIO_JSON_HPP
#define PTSF_SCENARIO_JSON_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ptsf/scenario.hpp"

namespace ptsf {

/// Build a Scenario from one JSON object. Strict: unknown keys are
/// rejected. Defaults: t0 = 0, dt = T/4000, auto gains with margin 0.1 and
/// c_n = margin, ramp_m = 2, ramp_T = 0.5, mu_max = 1000,
/// terminal_eps = 1e-3, t_end = t0 + T + ramp_T + 1, and for the
/// tracking-sine nominal omega = 2*pi/T. Throws ScenarioError carrying
/// every issue found, each with its key path.
Scenario scenario_from_json(const nlohmann::json& doc,
                            const std::string& path = "scenario");

/// Parse a document holding a single scenario object.
Scenario parse_scenario(const std::string& text);

/// Parse a document holding either a single scenario object or a list
/// {"scenarios": [...]}; entries are named scenario_1, ... when unnamed.
std::vector<Scenario> parse_scenario_file(const std::string& text);

/// Scenario as JSON with every field resolved, so parsing it back yields
/// the identical scenario. External nominal controllers cannot be
/// serialized.
nlohmann::json scenario_to_json(const Scenario& scenario);

std::string serialize_scenario(const Scenario& scenario);

}  // namespace ptsf

#endif  // PTSF_SCENARIO_JSON_HPP
