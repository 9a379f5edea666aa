#include "ptsf/csv_io.hpp"

#include <fstream>
#include <sstream>

#include "ptsf/errors.hpp"
#include "ptsf/format.hpp"

namespace ptsf {

namespace {

std::string sanitize_label(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' ||
                    c == '.';
    if (!ok) c = '_';
  }
  return out;
}

}  // namespace

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  if (trajectory.samples.empty())
    throw DomainError("write_trajectory_csv: empty trajectory");
  const std::size_t n = trajectory.order;

  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
  out << ",u,u_nom,safe_bound";
  for (std::size_t i = 1; i <= n; ++i) out << ",h" << i;
  out << ",override,mu_clipped\n";

  for (const auto& s : trajectory.samples) {
    out << format_shortest(s.t);
    for (double v : s.x) out << ',' << format_shortest(v);
    out << ',' << format_shortest(s.u) << ',' << format_shortest(s.u_nom)
        << ',' << format_shortest(s.safe_bound);
    for (double v : s.h) out << ',' << format_shortest(v);
    out << ',' << (s.override_active ? '1' : '0') << ','
        << (s.mu_clipped ? '1' : '0') << '\n';
  }
}

void write_trajectory_csv(const Trajectory& trajectory,
                          const std::filesystem::path& destination) {
  std::ofstream file(destination);
  if (!file)
    throw std::runtime_error("cannot open " + destination.string() +
                             " for writing");
  write_trajectory_csv(trajectory, file);
  file.flush();
  if (!file)
    throw std::runtime_error("failed while writing " + destination.string());
}

std::string trajectory_csv_string(const Trajectory& trajectory) {
  std::ostringstream out;
  write_trajectory_csv(trajectory, out);
  return out.str();
}

nlohmann::json metrics_to_json(const Metrics& m) {
  nlohmann::json j;
  j["min_h1"] = m.min_h1;
  j["min_y_margin"] = m.min_y_margin;
  j["max_abs_u"] = m.max_abs_u;
  if (m.max_abs_jerk_on_override)
    j["max_abs_jerk_on_override"] = *m.max_abs_jerk_on_override;
  else
    j["max_abs_jerk_on_override"] = nullptr;
  j["x1_at_T"] = m.x1_at_T;
  auto intervals = nlohmann::json::array();
  for (const auto& [start, end] : m.override_intervals)
    intervals.push_back({start, end});
  j["override_intervals"] = intervals;
  return j;
}

void emit_plot_data(const ComparisonReport& report,
                    const std::filesystem::path& directory) {
  if (report.variants.empty())
    throw DomainError("emit_plot_data: empty comparison report");
  std::filesystem::create_directories(directory);

  auto manifest_variants = nlohmann::json::array();
  for (const auto& variant : report.variants) {
    const std::string filename = sanitize_label(variant.label) + ".csv";
    write_trajectory_csv(variant.trajectory, directory / filename);
    manifest_variants.push_back({{"name", variant.label},
                                 {"csv", filename},
                                 {"metrics", metrics_to_json(variant.metrics)}});
  }
  nlohmann::json manifest;
  manifest["variants"] = manifest_variants;

  const auto manifest_path = directory / "manifest.json";
  std::ofstream file(manifest_path);
  if (!file)
    throw std::runtime_error("cannot open " + manifest_path.string() +
                             " for writing");
  file << manifest.dump(2) << "\n";
  file.flush();
  if (!file)
    throw std::runtime_error("failed while writing " +
                             manifest_path.string());
}

}  // namespace ptsf
