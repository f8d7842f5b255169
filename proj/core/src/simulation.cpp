#include "netcons/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include "netcons/errors.hpp"
#include "netcons/noise.hpp"
#include "netcons/plant.hpp"

namespace netcons {

Scenario without_noise(Scenario s) {
    s.noise.distribution = NoiseDistribution::Zero;
    s.noise.spikes.clear();
    return s;
}

void summarize(const TrajectoryLog& log, const SystemModel& model, RunSummary& summary) {
    const std::size_t n = log.agents();
    summary.truncations.assign(n, 0);
    summary.final_u = log.final_u();
    summary.final_sigma = log.final_sigma();
    summary.final_spread = 0.0;
    summary.final_residual = 0.0;
    summary.sigma_bar_final = 0;
    summary.steps_completed = log.empty() ? 0 : log.last_step();
    if (log.empty()) return;

    for (std::size_t pos = 0; pos < log.size(); ++pos) {
        const auto row = log.row(pos);
        const bool last = pos + 1 == log.size();
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t next_sigma = 0;
            if (!last) {
                next_sigma = log.row(pos + 1)[i].sigma;
            } else if (log.has_final_state()) {
                next_sigma = log.final_sigma()[i];
            } else {
                continue;
            }
            if (next_sigma > row[i].sigma_prime) ++summary.truncations[i];
        }
    }

    const auto last_row = log.row(log.size() - 1);
    auto [lo, hi] = std::minmax_element(last_row.begin(), last_row.end(),
                                        [](const AgentRecord& a, const AgentRecord& b) { return a.y_next < b.y_next; });
    summary.final_spread = hi->y_next - lo->y_next;

    if (log.has_final_state()) {
        const auto g = regression_g(log.final_u(), model.gains, model.topology);
        for (double v : g) summary.final_residual = std::max(summary.final_residual, std::abs(v));
        summary.sigma_bar_final = *std::max_element(log.final_sigma().begin(), log.final_sigma().end());
    }
}

RunResult run(const Scenario& s, std::uint64_t seed) {
    require_valid(s, false);
    const auto start = std::chrono::steady_clock::now();
    const auto topology = scenario_topology(s);
    const auto model = system_model(s);
    const std::size_t n = s.agents;

    NoiseSpec noise = s.noise;
    noise.master_seed = seed;

    std::vector<AgentPlant> plants;
    plants.reserve(n);
    for (const auto& p : s.plants) plants.emplace_back(p.kind, p.C, p.D, p.f);

    const auto channels = directed_edges(topology);
    std::vector<EdgeStream> streams;
    streams.reserve(channels.size());
    for (const auto& c : channels) streams.emplace_back(noise, c.observer, c.observed);

    // Channels are observer-major, so agent i owns a contiguous block.
    std::vector<std::size_t> first_channel(n + 1, 0);
    for (const auto& c : channels) ++first_channel[c.observer + 1];
    for (std::size_t i = 0; i < n; ++i) first_channel[i + 1] += first_channel[i];

    const std::vector<double> initial = s.controller.initial_u.value_or(s.controller.u_star);
    std::vector<ControllerState> states(n);
    for (std::size_t i = 0; i < n; ++i) states[i] = {initial[i], 0, s.controller.u_star[i]};
    const Schedule schedule{s.controller.c_M};

    RunResult result;
    result.log = TrajectoryLog(n, channels);
    result.summary.label = s.label;
    result.summary.seed = seed;
    result.summary.horizon = s.horizon;
    result.summary.log_stride = s.log_stride;
    result.summary.scenario_hash = scenario_hash(s);

    std::vector<double> y(n);
    std::vector<ControllerState> next_states(n);
    std::vector<AgentRecord> agent_rows(n);
    std::vector<EdgeRecord> edge_rows(channels.size());
    StepInputs inputs;

    for (std::int64_t k = 1; k <= s.horizon; ++k) {
        try {
            for (std::size_t i = 0; i < n; ++i) y[i] = plants[i].step(states[i].u);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonFiniteValue) throw;
            result.summary.aborted = true;
            result.summary.diagnostic = "step " + std::to_string(k) + ": " + e.what();
            break;
        }
        for (std::size_t c = 0; c < channels.size(); ++c) {
            const double eps = streams[c].sample();
            edge_rows[c] = {y[channels[c].observed] + eps, eps};
        }
        for (std::size_t i = 0; i < n; ++i) {
            inputs.own_output = y[i];
            inputs.neighbors.clear();
            for (std::size_t c = first_channel[i]; c < first_channel[i + 1]; ++c) {
                const auto j = channels[c].observed;
                inputs.neighbors.push_back({j, channels[c].weight, edge_rows[c].z, states[j].sigma});
            }
            const auto step = controller_step(states[i], inputs, k, schedule);
            next_states[i] = step.result.next;
            agent_rows[i] = {states[i].u, states[i].sigma, step.sigma_prime, step.u_prime, y[i], step.observation};
        }
        // Commit only after every agent has read the step-k states.
        states.swap(next_states);
        result.log.append(k, agent_rows, edge_rows);
    }

    if (!result.summary.aborted) {
        std::vector<double> u(n);
        std::vector<std::int64_t> sigma(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = states[i].u;
            sigma[i] = states[i].sigma;
        }
        result.log.set_final_state(std::move(u), std::move(sigma));
    }
    summarize(result.log, model, result.summary);
    result.summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

BatchResult batch(const Scenario& s, std::span<const std::uint64_t> seeds, std::size_t workers) {
    if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "batch needs at least one seed");
    require_valid(s, false);

    BatchResult out;
    std::set<std::uint64_t> seen;
    for (auto seed : seeds) {
        if (!seen.insert(seed).second) out.warnings.push_back("duplicate seed " + std::to_string(seed));
    }

    out.runs.resize(seeds.size());
    std::vector<std::string> failures(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < seeds.size(); idx = next++) {
            try {
                out.runs[idx] = run(s, seeds[idx]);
            } catch (const std::exception& e) {
                failures[idx] = e.what();
                out.runs[idx].summary.seed = seeds[idx];
                out.runs[idx].summary.aborted = true;
                out.runs[idx].summary.diagnostic = e.what();
            }
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, seeds.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t idx = 0; idx < seeds.size(); ++idx) {
        if (!failures[idx].empty()) out.errors.push_back("seed " + std::to_string(seeds[idx]) + ": " + failures[idx]);
    }
    return out;
}

}  // namespace netcons
