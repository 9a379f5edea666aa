#include "ptsf/scenario_json.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <set>

#include "ptsf/errors.hpp"
#include "ptsf/simulator.hpp"

namespace ptsf {

namespace {

using nlohmann::json;

// Reads one JSON object while tracking which keys were consumed, so
// anything left over can be rejected with its path.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path,
               std::vector<std::string>& issues)
      : obj_(obj), path_(std::move(path)), issues_(issues) {}

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json* take(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::optional<double> number(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      bad(key, "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::int64_t> integer(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      bad(key, "expected an integer");
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      bad(key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> number_array(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) {
      bad(key, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    out.reserve(v->size());
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) {
        bad(key + "[" + std::to_string(i) + "]", "expected a number");
        return std::nullopt;
      }
      out.push_back((*v)[i].get<double>());
    }
    return out;
  }

  void bad(const std::string& key, const std::string& msg) {
    issues_.push_back(path_ + "." + key + ": " + msg);
  }

  void reject_unknown() {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key()))
        issues_.push_back(path_ + ": unknown key '" + item.key() + "'");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

FilterChoice parse_filter(const json& v, const std::string& path,
                          std::vector<std::string>& issues) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "ptsf") return PtsfFilter{};
    if (s == "none") return NoFilter{};
    if (s.rfind("esf:", 0) == 0) {
      try {
        return EsfFilter{std::stod(s.substr(4))};
      } catch (const std::exception&) {
        issues.push_back(path + ": cannot parse rho in '" + s + "'");
        return NoFilter{};
      }
    }
    issues.push_back(path + ": expected \"ptsf\", \"esf:<rho>\" or "
                            "\"none\", got '" + s + "'");
    return NoFilter{};
  }
  if (!v.is_object()) {
    issues.push_back(path + ": expected a string or an object");
    return NoFilter{};
  }
  ObjectReader r(v, path, issues);
  const auto kind = r.string("kind");
  if (!kind) {
    issues.push_back(path + ".kind: required");
    return NoFilter{};
  }
  if (*kind == "ptsf") {
    PtsfFilter f;
    if (const auto m = r.integer("ramp_m")) f.config.ramp_m = static_cast<int>(*m);
    if (const auto t = r.number("ramp_T")) f.config.ramp_T = *t;
    if (const auto e = r.number("terminal_eps")) f.config.terminal_eps = *e;
    if (const auto c = r.number("mu_max")) f.config.mu_max = *c;
    r.reject_unknown();
    return f;
  }
  if (*kind == "esf") {
    EsfFilter f;
    if (const auto rho = r.number("rho"))
      f.rho = *rho;
    else
      issues.push_back(path + ".rho: required for the esf filter");
    r.reject_unknown();
    return f;
  }
  if (*kind == "none") {
    r.reject_unknown();
    return NoFilter{};
  }
  issues.push_back(path + ".kind: expected \"ptsf\", \"esf\" or \"none\", "
                          "got '" + *kind + "'");
  return NoFilter{};
}

GainPolicy parse_gains(const json& v, const std::string& path,
                       std::vector<std::string>& issues) {
  if (!v.is_object()) {
    issues.push_back(path + ": expected an object");
    return AutoGains{};
  }
  ObjectReader r(v, path, issues);
  const auto policy = r.string("policy");
  if (!policy) {
    issues.push_back(path + ".policy: required (\"auto\" or \"manual\")");
    return AutoGains{};
  }
  if (*policy == "auto") {
    AutoGains g;
    if (const auto m = r.number("margin")) g.margin = *m;
    g.c_n = g.margin;
    if (const auto c = r.number("c_n")) g.c_n = *c;
    r.reject_unknown();
    return g;
  }
  if (*policy == "manual") {
    ManualGains g;
    if (auto c = r.number_array("c"))
      g.gains.c = std::move(*c);
    else
      issues.push_back(path + ".c: required for manual gains");
    r.reject_unknown();
    return g;
  }
  issues.push_back(path + ".policy: expected \"auto\" or \"manual\", got '" +
                   *policy + "'");
  return AutoGains{};
}

NominalSpec parse_nominal(const json& v, const std::string& path,
                          double horizon, std::vector<std::string>& issues) {
  const double default_omega = 2.0 * std::numbers::pi / horizon;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "tracking_sine") {
      TrackingSineNominal n;
      n.omega = default_omega;
      return n;
    }
    if (s == "constant") return ConstantNominal{};
    issues.push_back(path + ": expected \"tracking_sine\", \"constant\" or "
                            "an object, got '" + s + "'");
    return ConstantNominal{};
  }
  if (!v.is_object()) {
    issues.push_back(path + ": expected a string or an object");
    return ConstantNominal{};
  }
  ObjectReader r(v, path, issues);
  const auto kind = r.string("kind");
  if (!kind) {
    issues.push_back(path + ".kind: required");
    return ConstantNominal{};
  }
  if (*kind == "tracking_sine") {
    TrackingSineNominal n;
    n.omega = default_omega;
    if (const auto k1 = r.number("k1")) n.k1 = *k1;
    if (const auto k2 = r.number("k2")) n.k2 = *k2;
    if (const auto a = r.number("amplitude")) n.amplitude = *a;
    if (const auto b = r.number("offset")) n.offset = *b;
    if (const auto w = r.number("omega")) n.omega = *w;
    r.reject_unknown();
    return n;
  }
  if (*kind == "constant") {
    ConstantNominal n;
    if (const auto val = r.number("value")) n.value = *val;
    r.reject_unknown();
    return n;
  }
  if (*kind == "pd_setpoint") {
    PdSetpointNominal n;
    if (auto k = r.number_array("k"))
      n.k = std::move(*k);
    else
      issues.push_back(path + ".k: required for pd_setpoint");
    if (const auto sp = r.number("setpoint")) n.setpoint = *sp;
    r.reject_unknown();
    return n;
  }
  if (*kind == "external") {
    issues.push_back(path +
                     ".kind: external controllers are code-only and cannot "
                     "appear in scenario files");
    return ConstantNominal{};
  }
  issues.push_back(path + ".kind: expected \"tracking_sine\", \"constant\" "
                          "or \"pd_setpoint\", got '" + *kind + "'");
  return ConstantNominal{};
}

}  // namespace

Scenario scenario_from_json(const json& doc, const std::string& path) {
  std::vector<std::string> issues;
  if (!doc.is_object())
    throw ScenarioError(path + ": expected a JSON object");

  ObjectReader r(doc, path, issues);
  Scenario sc;

  if (const auto name = r.string("name")) sc.name = *name;
  if (const auto desc = r.string("description")) sc.description = *desc;

  if (const auto n = r.integer("n")) {
    if (*n < 1)
      r.bad("n", "order must be >= 1");
    else
      sc.order = static_cast<std::size_t>(*n);
  } else if (!r.has("n")) {
    r.bad("n", "required");
  }

  if (auto x0 = r.number_array("x0"))
    sc.x0 = std::move(*x0);
  else if (!r.has("x0"))
    r.bad("x0", "required");

  if (const auto t0 = r.number("t0")) sc.t0 = *t0;

  if (const auto horizon = r.number("T")) {
    if (*horizon > 0.0)
      sc.horizon = *horizon;
    else
      r.bad("T", "horizon must be positive");
  } else if (!r.has("T")) {
    r.bad("T", "required");
  }

  if (const json* g = r.take("gains"))
    sc.gain_policy = parse_gains(*g, path + ".gains", issues);

  if (const json* f = r.take("filter"))
    sc.filter = parse_filter(*f, path + ".filter", issues);
  else
    r.bad("filter", "required (\"ptsf\", \"esf:<rho>\" or \"none\")");

  if (const json* nom = r.take("nominal"))
    sc.nominal = parse_nominal(*nom, path + ".nominal", sc.horizon, issues);
  else
    r.bad("nominal", "required");

  sc.dt = sc.horizon / 4000.0;
  if (const auto dt = r.number("dt")) sc.dt = *dt;

  const auto* ptsf_filter = std::get_if<PtsfFilter>(&sc.filter);
  const double ramp_T = ptsf_filter ? ptsf_filter->config.ramp_T
                                    : FilterConfig{}.ramp_T;
  sc.t_end = sc.t0 + sc.horizon + ramp_T + 1.0;
  if (const auto t_end = r.number("t_end")) sc.t_end = *t_end;

  r.reject_unknown();

  if (issues.empty()) {
    for (std::string& msg : scenario_issues(sc))
      issues.push_back(path + "." + msg);
  }
  if (!issues.empty()) throw ScenarioError(std::move(issues));
  return sc;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("syntax error: ") + e.what());
  }
  return scenario_from_json(doc);
}

std::vector<Scenario> parse_scenario_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object())
    throw ScenarioError("document: expected a JSON object");

  if (!doc.contains("scenarios")) return {scenario_from_json(doc)};

  std::vector<std::string> issues;
  ObjectReader r(doc, "document", issues);
  const json* list = r.take("scenarios");
  r.reject_unknown();
  if (!list->is_array() || list->empty())
    issues.push_back("document.scenarios: expected a nonempty array");
  if (!issues.empty()) throw ScenarioError(std::move(issues));

  std::vector<Scenario> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string path = "scenarios[" + std::to_string(i) + "]";
    Scenario sc = scenario_from_json((*list)[i], path);
    if (!(*list)[i].contains("name"))
      sc.name = "scenario_" + std::to_string(i + 1);
    if (!names.insert(sc.name).second)
      throw ScenarioError(path + ".name: duplicate scenario name '" +
                          sc.name + "'");
    out.push_back(std::move(sc));
  }
  return out;
}

json scenario_to_json(const Scenario& sc) {
  json doc;
  doc["name"] = sc.name;
  doc["description"] = sc.description;
  doc["n"] = sc.order;
  doc["x0"] = sc.x0;
  doc["t0"] = sc.t0;
  doc["T"] = sc.horizon;
  doc["dt"] = sc.dt;
  doc["t_end"] = sc.t_end;

  doc["gains"] = std::visit(
      [](const auto& g) -> json {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, AutoGains>) {
          return {{"policy", "auto"}, {"margin", g.margin}, {"c_n", g.c_n}};
        } else {
          return {{"policy", "manual"}, {"c", g.gains.c}};
        }
      },
      sc.gain_policy);

  doc["filter"] = std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PtsfFilter>) {
          return {{"kind", "ptsf"},
                  {"ramp_m", f.config.ramp_m},
                  {"ramp_T", f.config.ramp_T},
                  {"terminal_eps", f.config.terminal_eps},
                  {"mu_max", f.config.mu_max}};
        } else if constexpr (std::is_same_v<T, EsfFilter>) {
          return {{"kind", "esf"}, {"rho", f.rho}};
        } else {
          return {{"kind", "none"}};
        }
      },
      sc.filter);

  doc["nominal"] = std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TrackingSineNominal>) {
          return {{"kind", "tracking_sine"}, {"k1", n.k1},
                  {"k2", n.k2},              {"amplitude", n.amplitude},
                  {"offset", n.offset},      {"omega", n.omega}};
        } else if constexpr (std::is_same_v<T, ConstantNominal>) {
          return {{"kind", "constant"}, {"value", n.value}};
        } else if constexpr (std::is_same_v<T, PdSetpointNominal>) {
          return {{"kind", "pd_setpoint"},
                  {"k", n.k},
                  {"setpoint", n.setpoint}};
        } else {
          throw ScenarioError(
              "nominal: external controllers are not serializable");
          return json{};
        }
      },
      sc.nominal);
  return doc;
}

std::string serialize_scenario(const Scenario& sc) {
  return scenario_to_json(sc).dump(2) + "\n";
}

}  // namespace ptsf
