#ifndef PTSF_CSV_IO_HPP
#define PTSF_CSV_IO_HPP

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ptsf/simulator.hpp"

namespace ptsf {

/// Trajectory as CSV with the fixed column order
///   t,x1..xn,u,u_nom,safe_bound,h1..hn,override,mu_clipped
/// Numbers use the shortest round-trip decimal form; flags are 0/1.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);
void write_trajectory_csv(const Trajectory& trajectory,
                          const std::filesystem::path& destination);
std::string trajectory_csv_string(const Trajectory& trajectory);

nlohmann::json metrics_to_json(const Metrics& metrics);

/// One CSV per variant plus manifest.json mapping variant names to their
/// files and metric summaries; enough to regenerate the comparison plots
/// with any external tool.
void emit_plot_data(const ComparisonReport& report,
                    const std::filesystem::path& directory);

}  // namespace ptsf

#endif  // PTSF_CSV_IO_HPP
