#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptsf/backstepping.hpp"
#include "ptsf/csv_io.hpp"
#include "ptsf/errors.hpp"
#include "ptsf/format.hpp"
#include "ptsf/scenario_json.hpp"
#include "ptsf/simulator.hpp"
#include "ptsf/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerification = 3;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file)
    throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

ptsf::FilterChoice filter_from_flag(const std::string& token,
                                    const ptsf::Scenario& base) {
  if (token == "ptsf") {
    if (const auto* p = std::get_if<ptsf::PtsfFilter>(&base.filter))
      return *p;
    return ptsf::PtsfFilter{};
  }
  if (token == "none") return ptsf::NoFilter{};
  if (token.rfind("esf:", 0) == 0) {
    try {
      return ptsf::EsfFilter{std::stod(token.substr(4))};
    } catch (const std::exception&) {
      throw ptsf::ScenarioError("--filters: cannot parse rho in '" + token +
                                "'");
    }
  }
  throw ptsf::ScenarioError("--filters: expected ptsf, esf:<rho> or none, "
                            "got '" + token + "'");
}

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& doc) {
  std::ofstream file(path);
  if (!file)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << doc.dump(2) << "\n";
  file.flush();
  if (!file)
    throw std::runtime_error("failed while writing " + path.string());
}

ptsf::HorizonClock clock_for(const ptsf::Scenario& sc) {
  const auto* p = std::get_if<ptsf::PtsfFilter>(&sc.filter);
  return ptsf::HorizonClock(sc.t0, sc.horizon,
                            p ? p->config.mu_max : 1000.0);
}

int cmd_simulate(const std::string& scenario_path,
                 const std::string& out_dir) {
  const auto scenarios = ptsf::parse_scenario_file(read_file(scenario_path));
  std::filesystem::create_directories(out_dir);
  for (const auto& sc : scenarios) {
    const ptsf::Trajectory traj = ptsf::simulate(sc);
    const ptsf::Metrics metrics = ptsf::compute_metrics(traj, clock_for(sc));

    const auto csv_path =
        std::filesystem::path(out_dir) / (sc.name + ".csv");
    ptsf::write_trajectory_csv(traj, csv_path);
    write_json_file(std::filesystem::path(out_dir) / (sc.name + "_metrics.json"),
                    ptsf::metrics_to_json(metrics));

    std::cout << sc.name << ": " << traj.samples.size() << " samples -> "
              << csv_path.string() << "\n"
              << "  min h1 = " << ptsf::format_shortest(metrics.min_h1)
              << ", max |u| = " << ptsf::format_shortest(metrics.max_abs_u)
              << ", x1 at T = " << ptsf::format_shortest(metrics.x1_at_T)
              << ", override intervals = " << metrics.override_intervals.size()
              << "\n";
  }
  return kExitOk;
}

int cmd_compare(const std::string& scenario_path, const std::string& filters,
                const std::string& out_dir) {
  const auto scenarios = ptsf::parse_scenario_file(read_file(scenario_path));
  if (scenarios.size() != 1)
    throw ptsf::ScenarioError(
        "compare: the scenario file must hold exactly one scenario");
  const ptsf::Scenario& base = scenarios.front();

  std::vector<ptsf::FilterChoice> variants;
  std::stringstream tokens(filters);
  std::string token;
  while (std::getline(tokens, token, ','))
    if (!token.empty()) variants.push_back(filter_from_flag(token, base));
  if (variants.empty())
    throw ptsf::ScenarioError("--filters: no filter variants given");

  const ptsf::ComparisonReport report =
      ptsf::compare_filters(base, variants);
  ptsf::emit_plot_data(report, out_dir);

  for (const auto& variant : report.variants) {
    std::cout << variant.label << ": min h1 = "
              << ptsf::format_shortest(variant.metrics.min_h1);
    if (variant.metrics.max_abs_jerk_on_override)
      std::cout << ", max jerk on override = "
                << ptsf::format_shortest(
                       *variant.metrics.max_abs_jerk_on_override);
    std::cout << "\n";
  }
  std::cout << "wrote " << report.variants.size()
            << " trajectory files and manifest.json to " << out_dir << "\n";
  return kExitOk;
}

int cmd_gains(const std::string& scenario_path) {
  const auto scenarios = ptsf::parse_scenario_file(read_file(scenario_path));
  for (const auto& sc : scenarios) {
    const ptsf::HorizonClock clock = clock_for(sc);
    std::vector<double> bounds;
    ptsf::GainVector gains;
    if (const auto* a = std::get_if<ptsf::AutoGains>(&sc.gain_policy)) {
      const ptsf::GainSelection sel =
          ptsf::select_gains_detailed(sc.x0, clock, a->margin, a->c_n);
      bounds = sel.lower_bounds;
      gains = sel.gains;
    } else {
      gains = std::get<ptsf::ManualGains>(sc.gain_policy).gains;
      bounds = ptsf::gain_bounds_for(gains, sc.x0, clock);
    }
    std::cout << sc.name << ":\n";
    for (std::size_t i = 0; i < gains.size(); ++i) {
      std::cout << "  c_" << (i + 1) << " = "
                << ptsf::format_shortest(gains[i]);
      if (i < bounds.size())
        std::cout << "  (lower bound " << ptsf::format_shortest(bounds[i])
                  << ")";
      else
        std::cout << "  (last gain, needs only c_" << (i + 1) << " >= 0)";
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite_name) {
  const auto suite = ptsf::parse_suite(suite_name);
  if (!suite)
    throw ptsf::ScenarioError(
        "--suite: expected kernel, backstepping, oracles or all, got '" +
        suite_name + "'");
  const ptsf::VerificationReport report = ptsf::run_verification_suite(*suite);
  for (const auto& check : report.checks) {
    std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << "\n";
    if (!check.passed && !check.detail.empty())
      std::cout << "       " << check.detail << "\n";
  }
  if (!report.all_passed()) return kExitVerification;
  std::cout << report.checks.size() << " checks passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prescribed-time safety filters for integrator chains"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::string filters = "ptsf,esf:0.6,esf:3.2";
  std::string suite = "all";

  auto* sim = app.add_subcommand(
      "simulate", "Run scenarios and write trajectory CSVs plus metrics");
  sim->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  sim->add_option("--out", out_dir, "Output directory");

  auto* cmp = app.add_subcommand(
      "compare", "Run one scenario under several filters and emit plot data");
  cmp->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  cmp->add_option("--filters", filters,
                  "Comma list of variants: ptsf, esf:<rho>, none");
  cmp->add_option("--out", out_dir, "Output directory");

  auto* gns = app.add_subcommand(
      "gains", "Print gain lower bounds and the gains in effect");
  gns->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();

  auto* ver = app.add_subcommand("verify", "Run the numerical check suites");
  ver->add_option("--suite", suite, "kernel | backstepping | oracles | all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(scenario_path, out_dir);
    if (cmp->parsed()) return cmd_compare(scenario_path, filters, out_dir);
    if (gns->parsed()) return cmd_gains(scenario_path);
    return cmd_verify(suite);
  } catch (const ptsf::ScenarioError& e) {
    std::cerr << "validation error:\n";
    for (const auto& issue : e.issues()) std::cerr << "  " << issue << "\n";
    return kExitValidation;
  } catch (const ptsf::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
