#include "netcons/controller.hpp"

#include <algorithm>
#include <cmath>

namespace netcons {

std::int64_t pooled_sigma(const ControllerState& s, std::span<const std::int64_t> neighbor_sigmas) {
    std::int64_t pooled = s.sigma;
    for (auto sigma : neighbor_sigmas) pooled = std::max(pooled, sigma);
    return pooled;
}

std::int64_t pooled_sigma(const ControllerState& s, const StepInputs& inputs) {
    std::int64_t pooled = s.sigma;
    for (const auto& nb : inputs.neighbors) pooled = std::max(pooled, nb.sigma);
    return pooled;
}

double catch_up(const ControllerState& s, std::int64_t sigma_pooled) {
    return sigma_pooled > s.sigma ? s.u_star : s.u;
}

double aggregate_observation(const StepInputs& inputs) {
    double sum = 0.0;
    for (const auto& nb : inputs.neighbors) sum += nb.weight * (nb.observation - inputs.own_output);
    return sum;
}

UpdateResult update(const ControllerState& s, double u_prime, std::int64_t sigma_pooled, double observation,
                    std::int64_t k, const Schedule& schedule) {
    UpdateResult out;
    out.candidate = u_prime + Schedule::step_size(k) * observation;
    out.next.u_star = s.u_star;
    // Ties go to truncation.
    if (std::abs(out.candidate) < schedule.bound(sigma_pooled)) {
        out.next.u = out.candidate;
        out.next.sigma = sigma_pooled;
    } else {
        out.next.u = s.u_star;
        out.next.sigma = sigma_pooled + 1;
        out.truncated = true;
    }
    return out;
}

AgentStepRecord controller_step(const ControllerState& s, const StepInputs& inputs, std::int64_t k,
                                const Schedule& schedule) {
    AgentStepRecord rec;
    rec.sigma_prime = pooled_sigma(s, inputs);
    rec.u_prime = catch_up(s, rec.sigma_prime);
    rec.observation = aggregate_observation(inputs);
    rec.result = update(s, rec.u_prime, rec.sigma_prime, rec.observation, k, schedule);
    return rec;
}

}  // namespace netcons
