#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace netcons {

class Topology;

/// Per-agent quantities of loop step k: the state (u_{i,k}, sigma_{i,k}) the
/// step started from, the pooled values, and what the step produced.
struct AgentRecord {
    double u = 0.0;
    std::int64_t sigma = 0;
    std::int64_t sigma_prime = 0;
    double u_prime = 0.0;
    double y_next = 0.0;  // y_{i,k+1}
    double O_next = 0.0;  // O_{i,k+1}
};

struct DirectedEdge {
    std::size_t observer = 0;  // i
    std::size_t observed = 0;  // j
    double weight = 0.0;       // p_ij
};

struct EdgeRecord {
    double z = 0.0;    // z_{ij,k+1}
    double eps = 0.0;  // eps_{ij,k+1}
};

/// Directed observation channels, observer-major, neighbors ascending.
std::vector<DirectedEdge> directed_edges(const Topology& t);

/// Record of a run. Steps are appended in increasing order; a step may carry
/// agent data only (strided edge logging) or both.
class TrajectoryLog {
public:
    TrajectoryLog() = default;
    TrajectoryLog(std::size_t agents, std::vector<DirectedEdge> edges);

    void append(std::int64_t k, std::span<const AgentRecord> agents, std::span<const EdgeRecord> edges);

    [[nodiscard]] std::size_t agents() const noexcept { return agents_; }
    [[nodiscard]] const std::vector<DirectedEdge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<std::int64_t>& steps() const noexcept { return steps_; }
    [[nodiscard]] std::size_t size() const noexcept { return steps_.size(); }
    [[nodiscard]] bool empty() const noexcept { return steps_.empty(); }
    [[nodiscard]] std::int64_t last_step() const { return steps_.back(); }

    [[nodiscard]] bool has_step(std::int64_t k) const noexcept { return index_of(k) >= 0; }
    [[nodiscard]] bool has_edges(std::int64_t k) const noexcept;

    /// True when steps are exactly 1..last_step, each with edge data.
    [[nodiscard]] bool is_complete() const noexcept;

    /// Throws StepNotLogged.
    [[nodiscard]] std::span<const AgentRecord> at(std::int64_t k) const;
    [[nodiscard]] const AgentRecord& at(std::int64_t k, std::size_t i) const { return at(k)[i]; }
    [[nodiscard]] std::span<const EdgeRecord> edges_at(std::int64_t k) const;

    /// Row access by position in steps().
    [[nodiscard]] std::span<const AgentRecord> row(std::size_t pos) const;

    /// State (u_{i,K+1}, sigma_{i,K+1}) after the last step.
    void set_final_state(std::vector<double> u, std::vector<std::int64_t> sigma);
    [[nodiscard]] bool has_final_state() const noexcept { return final_u_.size() == agents_ && agents_ > 0; }
    [[nodiscard]] const std::vector<double>& final_u() const noexcept { return final_u_; }
    [[nodiscard]] const std::vector<std::int64_t>& final_sigma() const noexcept { return final_sigma_; }

    /// Mutable access for negative-control tests that tamper with a log.
    AgentRecord& mutable_at(std::int64_t k, std::size_t i);
    std::vector<double>& mutable_final_u() noexcept { return final_u_; }

private:
    [[nodiscard]] std::ptrdiff_t index_of(std::int64_t k) const noexcept;

    std::size_t agents_ = 0;
    std::vector<DirectedEdge> edges_;
    std::vector<std::int64_t> steps_;
    std::vector<AgentRecord> agent_rows_;
    std::vector<std::ptrdiff_t> edge_offset_;  // -1 when the step has no edge data
    std::vector<EdgeRecord> edge_rows_;
    std::vector<double> final_u_;
    std::vector<std::int64_t> final_sigma_;
};

}  // namespace netcons
