#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace netcons {

/// Step size a_k = 1/k and truncation bound M_s = ln(s + c_M).
struct Schedule {
    double c_M = 55.0;

    [[nodiscard]] static double step_size(std::int64_t k) noexcept { return 1.0 / static_cast<double>(k); }
    [[nodiscard]] double bound(std::int64_t sigma) const noexcept {
        return std::log(static_cast<double>(sigma) + c_M);
    }
};

/// Per-agent estimate u_{i,k}, truncation number sigma_{i,k} and reset point u_i*.
struct ControllerState {
    double u = 0.0;
    std::int64_t sigma = 0;
    double u_star = 0.0;
};

/// What agent i learns about neighbor j at time k+1.
struct NeighborReport {
    std::size_t index = 0;
    double weight = 0.0;       // p_ij
    double observation = 0.0;  // z_{ij,k+1}
    std::int64_t sigma = 0;    // sigma_{j,k}
};

struct StepInputs {
    double own_output = 0.0;  // y_{i,k+1}
    std::vector<NeighborReport> neighbors;
};

/// sigma'_{i,k} = max(sigma_{i,k}, sigma_{j,k} for j in N_i).
std::int64_t pooled_sigma(const ControllerState& s, std::span<const std::int64_t> neighbor_sigmas);
std::int64_t pooled_sigma(const ControllerState& s, const StepInputs& inputs);

/// u'_{i,k}: the own estimate when no neighbor is ahead, u_i* otherwise.
double catch_up(const ControllerState& s, std::int64_t sigma_pooled);

/// O_{i,k+1} = sum_j p_ij (z_{ij,k+1} - y_{i,k+1}).
double aggregate_observation(const StepInputs& inputs);

struct UpdateResult {
    ControllerState next;
    double candidate = 0.0;  // u' + a_k O
    bool truncated = false;
};

/// Expanding-truncation update: keep the candidate when |candidate| <
/// M_{sigma'}, otherwise reset to u* and bump the truncation number.
UpdateResult update(const ControllerState& s, double u_prime, std::int64_t sigma_pooled, double observation,
                    std::int64_t k, const Schedule& schedule);

/// Everything a single agent computes during one step.
struct AgentStepRecord {
    std::int64_t sigma_prime = 0;
    double u_prime = 0.0;
    double observation = 0.0;
    UpdateResult result;
};

AgentStepRecord controller_step(const ControllerState& s, const StepInputs& inputs, std::int64_t k,
                                const Schedule& schedule);

}  // namespace netcons
