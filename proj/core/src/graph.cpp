#include "netcons/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

#include "netcons/errors.hpp"

namespace netcons {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::RootSolverFailure: return "RootSolverFailure";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::ZeroDCGain: return "ZeroDCGain";
        case ErrorCode::NotAnEdge: return "NotAnEdge";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::StepNotLogged: return "StepNotLogged";
        case ErrorCode::IncompleteLog: return "IncompleteLog";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Topology::Topology(std::size_t n, std::span<const WeightedEdge> edges)
    : n_(n), neighbors_(n), degrees_(n, 0.0) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument, "a topology needs at least 2 agents, got " + std::to_string(n));
    }
    for (const auto& e : edges) {
        if (e.i >= n || e.j >= n) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ") outside 0.." +
                            std::to_string(n - 1));
        }
        if (e.i == e.j) {
            throw Error(ErrorCode::SelfLoop, "self-loop at agent " + std::to_string(e.i));
        }
        if (!(e.weight > 0.0)) {
            throw Error(ErrorCode::NonpositiveWeight, "edge weight must be > 0, got " + std::to_string(e.weight));
        }
        WeightedEdge canonical{std::min(e.i, e.j), std::max(e.i, e.j), e.weight};
        const bool duplicate = std::any_of(edges_.begin(), edges_.end(), [&](const WeightedEdge& x) {
            return x.i == canonical.i && x.j == canonical.j;
        });
        if (duplicate) {
            throw Error(ErrorCode::DuplicateEdge,
                        "edge {" + std::to_string(canonical.i) + ", " + std::to_string(canonical.j) + "} given twice");
        }
        edges_.push_back(canonical);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (const auto& e : edges_) {
        neighbors_[e.i].push_back({e.j, e.weight});
        neighbors_[e.j].push_back({e.i, e.weight});
        degrees_[e.i] += e.weight;
        degrees_[e.j] += e.weight;
    }
    for (auto& list : neighbors_) {
        std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    }
}

double Topology::weight(std::size_t i, std::size_t j) const {
    for (const auto& nb : neighbors_.at(i)) {
        if (nb.index == j) return nb.weight;
    }
    return 0.0;
}

Eigen::MatrixXd Topology::adjacency() const {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (const auto& e : edges_) {
        const auto a = static_cast<Eigen::Index>(e.i);
        const auto b = static_cast<Eigen::Index>(e.j);
        P(a, b) = e.weight;
        P(b, a) = e.weight;
    }
    return P;
}

Topology build_topology(std::size_t n, std::span<const WeightedEdge> edges) { return Topology(n, edges); }

LaplacianView laplacian(const Topology& t) {
    LaplacianView view;
    view.adjacency = t.adjacency();
    const auto n = static_cast<Eigen::Index>(t.size());
    view.degree = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) view.degree(i, i) = t.degree(static_cast<std::size_t>(i));
    view.laplacian = view.degree - view.adjacency;
    return view;
}

std::vector<std::size_t> hop_distances(const Topology& t, std::size_t source) {
    constexpr auto unreachable = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(t.size(), unreachable);
    std::deque<std::size_t> frontier{source};
    dist.at(source) = 0;
    while (!frontier.empty()) {
        const auto cur = frontier.front();
        frontier.pop_front();
        for (const auto& nb : t.neighbors(cur)) {
            if (dist[nb.index] == unreachable) {
                dist[nb.index] = dist[cur] + 1;
                frontier.push_back(nb.index);
            }
        }
    }
    return dist;
}

bool is_connected(const Topology& t) {
    const auto dist = hop_distances(t, 0);
    return std::none_of(dist.begin(), dist.end(),
                        [](std::size_t d) { return d == std::numeric_limits<std::size_t>::max(); });
}

std::size_t diameter(const Topology& t) {
    std::size_t best = 0;
    for (std::size_t s = 0; s < t.size(); ++s) {
        for (auto d : hop_distances(t, s)) {
            if (d == std::numeric_limits<std::size_t>::max()) {
                throw Error(ErrorCode::Disconnected, "diameter is undefined on a disconnected graph");
            }
            best = std::max(best, d);
        }
    }
    return best;
}

double laplacian_quadratic_form(const Eigen::MatrixXd& L, const Eigen::VectorXd& y) { return y.dot(L * y); }

double pairwise_disagreement(const Topology& t, const Eigen::VectorXd& y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (const auto& nb : t.neighbors(i)) {
            const double diff = y(static_cast<Eigen::Index>(i)) - y(static_cast<Eigen::Index>(nb.index));
            sum += nb.weight * diff * diff;
        }
    }
    return 0.5 * sum;
}

double algebraic_connectivity(const Topology& t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(t).laplacian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(1);
}

}  // namespace netcons
