#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netcons/scenario.hpp"
#include "netcons/trajectory.hpp"

namespace netcons {

struct RunSummary {
    std::string label;
    std::uint64_t seed = 0;
    std::int64_t horizon = 0;
    std::int64_t steps_completed = 0;
    std::int64_t log_stride = 1;
    std::uint64_t scenario_hash = 0;
    double final_spread = 0.0;    // max_{i,j} |y_{i,K+1} - y_{j,K+1}|
    double final_residual = 0.0;  // ||L h(u_{K+1})||_inf
    std::vector<std::int64_t> truncations;  // resets triggered by each agent itself
    std::int64_t sigma_bar_final = 0;
    double wall_time = 0.0;  // seconds
    std::vector<double> final_u;
    std::vector<std::int64_t> final_sigma;
    bool aborted = false;
    std::string diagnostic;
};

struct RunResult {
    TrajectoryLog log;
    RunSummary summary;
};

/// Copy of `s` with the observation noise switched off.
Scenario without_noise(Scenario s);

/// Synchronous loop for k = 1..K: every plant maps u_{i,k} to y_{i,k+1}, every
/// directed channel draws eps_{ij,k+1}, then every controller updates from the
/// step-k truncation numbers of its neighbors. `seed` replaces the noise
/// master seed. A non-finite plant output stops the run; the partial log is
/// kept and the summary is marked aborted.
RunResult run(const Scenario& s, std::uint64_t seed);

/// Summary fields derived from a log. Everything in RunSummary except
/// bookkeeping (label, seed, wall time) comes from here.
void summarize(const TrajectoryLog& log, const SystemModel& model, RunSummary& summary);

struct BatchResult {
    std::vector<RunResult> runs;  // same order as the seed list
    std::vector<std::string> warnings;
    std::vector<std::string> errors;  // "seed <s>: <message>" for failed runs
};

/// Independent runs spread over `workers` threads (0 = hardware concurrency).
/// Throws InvalidArgument on an empty seed list.
BatchResult batch(const Scenario& s, std::span<const std::uint64_t> seeds, std::size_t workers = 0);

}  // namespace netcons
