#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "netcons/analysis.hpp"
#include "netcons/scenario.hpp"
#include "netcons/simulation.hpp"

namespace netcons {

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);
/// Inverse of format_double. Throws ParseError.
double parse_double(std::string_view text);

/// Columns k, agent, u, sigma, sigma_prime, u_prime, y_next, O_next; agents
/// 1-based; steps with (k - 1) % stride == 0.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log, std::int64_t stride = 1);
/// Columns k, i, j, z, eps.
void write_edges_csv(std::ostream& out, const TrajectoryLog& log, std::int64_t stride = 1);
/// Columns k, spread_y, residual, sigma_bar, v.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows, std::int64_t stride = 1);

nlohmann::json summary_to_json(const RunSummary& s);

/// Writes trajectory.csv, edges.csv, metrics.csv, summary.json and
/// scenario.json (with the run seed in place of the noise seed) into `dir`,
/// creating it if needed. Throws IoError.
void write_run(const std::filesystem::path& dir, const Scenario& s, const RunResult& r);

struct LoadedRun {
    Scenario scenario;
    TrajectoryLog log;
    nlohmann::json summary;
    std::int64_t stride = 1;
};

/// Reads a directory written by write_run. Throws IoError when a file is
/// missing and ParseError when one is malformed.
LoadedRun read_log_dir(const std::filesystem::path& dir);

/// Steps 1..K sampled densely at first and geometrically afterwards, about
/// `per_decade` points per factor of ten. Always contains 1 and K.
std::vector<std::int64_t> geometric_steps(std::int64_t K, int per_decade = 200);

/// inputs.csv (k, u_1..u_N) and outputs.csv (k, y_1..y_N) on geometric_steps,
/// restricted to logged steps. Returns the two paths.
std::vector<std::filesystem::path> write_plotdata(const TrajectoryLog& log, const std::filesystem::path& dir,
                                                  int per_decade = 200);

}  // namespace netcons
