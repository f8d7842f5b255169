#include "netcons/trajectory.hpp"

#include <algorithm>
#include <string>

#include "netcons/errors.hpp"
#include "netcons/graph.hpp"

namespace netcons {

std::vector<DirectedEdge> directed_edges(const Topology& t) {
    std::vector<DirectedEdge> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (const auto& nb : t.neighbors(i)) out.push_back({i, nb.index, nb.weight});
    }
    return out;
}

TrajectoryLog::TrajectoryLog(std::size_t agents, std::vector<DirectedEdge> edges)
    : agents_(agents), edges_(std::move(edges)) {}

void TrajectoryLog::append(std::int64_t k, std::span<const AgentRecord> agents, std::span<const EdgeRecord> edges) {
    if (agents.size() != agents_) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(agents_) + " agent records");
    }
    if (!edges.empty() && edges.size() != edges_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(edges_.size()) + " edge records");
    }
    if (!steps_.empty() && k <= steps_.back()) {
        throw Error(ErrorCode::InvalidArgument, "log steps must be strictly increasing");
    }
    steps_.push_back(k);
    agent_rows_.insert(agent_rows_.end(), agents.begin(), agents.end());
    if (edges.empty()) {
        edge_offset_.push_back(-1);
    } else {
        edge_offset_.push_back(static_cast<std::ptrdiff_t>(edge_rows_.size()));
        edge_rows_.insert(edge_rows_.end(), edges.begin(), edges.end());
    }
}

std::ptrdiff_t TrajectoryLog::index_of(std::int64_t k) const noexcept {
    if (steps_.empty()) return -1;
    // Fast path for complete logs starting at 1.
    const auto guess = k - steps_.front();
    if (guess >= 0 && static_cast<std::size_t>(guess) < steps_.size() &&
        steps_[static_cast<std::size_t>(guess)] == k) {
        return static_cast<std::ptrdiff_t>(guess);
    }
    const auto it = std::lower_bound(steps_.begin(), steps_.end(), k);
    if (it == steps_.end() || *it != k) return -1;
    return it - steps_.begin();
}

bool TrajectoryLog::has_edges(std::int64_t k) const noexcept {
    const auto idx = index_of(k);
    return idx >= 0 && edge_offset_[static_cast<std::size_t>(idx)] >= 0;
}

bool TrajectoryLog::is_complete() const noexcept {
    if (steps_.empty() || steps_.front() != 1 || steps_.back() != static_cast<std::int64_t>(steps_.size())) {
        return false;
    }
    return std::all_of(edge_offset_.begin(), edge_offset_.end(), [](std::ptrdiff_t off) { return off >= 0; });
}

std::span<const AgentRecord> TrajectoryLog::row(std::size_t pos) const {
    return {agent_rows_.data() + pos * agents_, agents_};
}

std::span<const AgentRecord> TrajectoryLog::at(std::int64_t k) const {
    const auto idx = index_of(k);
    if (idx < 0) throw Error(ErrorCode::StepNotLogged, "step " + std::to_string(k) + " is not in the log");
    return row(static_cast<std::size_t>(idx));
}

std::span<const EdgeRecord> TrajectoryLog::edges_at(std::int64_t k) const {
    const auto idx = index_of(k);
    if (idx < 0 || edge_offset_[static_cast<std::size_t>(idx)] < 0) {
        throw Error(ErrorCode::StepNotLogged, "edge data for step " + std::to_string(k) + " is not in the log");
    }
    return {edge_rows_.data() + edge_offset_[static_cast<std::size_t>(idx)], edges_.size()};
}

void TrajectoryLog::set_final_state(std::vector<double> u, std::vector<std::int64_t> sigma) {
    if (u.size() != agents_ || sigma.size() != agents_) {
        throw Error(ErrorCode::DimensionMismatch, "final state must have one entry per agent");
    }
    final_u_ = std::move(u);
    final_sigma_ = std::move(sigma);
}

AgentRecord& TrajectoryLog::mutable_at(std::int64_t k, std::size_t i) {
    const auto idx = index_of(k);
    if (idx < 0) throw Error(ErrorCode::StepNotLogged, "step " + std::to_string(k) + " is not in the log");
    return agent_rows_.at(static_cast<std::size_t>(idx) * agents_ + i);
}

}  // namespace netcons
