#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace netcons {

/// Undirected weighted edge between agents i and j (0-based).
struct WeightedEdge {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 1.0;
};

struct Neighbor {
    std::size_t index = 0;
    double weight = 0.0;
};

/// Fixed undirected communication graph. Each unordered edge is stored once
/// (with i < j); neighbor lists are derived from it and sorted by index.
/// Immutable after construction.
class Topology {
public:
    Topology(std::size_t n, std::span<const WeightedEdge> edges);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<Neighbor>& neighbors(std::size_t i) const { return neighbors_.at(i); }

    /// p_i, the sum of weights incident to agent i.
    [[nodiscard]] double degree(std::size_t i) const { return degrees_.at(i); }

    /// p_ij, or 0 when i and j are not adjacent.
    [[nodiscard]] double weight(std::size_t i, std::size_t j) const;
    [[nodiscard]] bool adjacent(std::size_t i, std::size_t j) const { return weight(i, j) > 0.0; }

    [[nodiscard]] Eigen::MatrixXd adjacency() const;

private:
    std::size_t n_;
    std::vector<WeightedEdge> edges_;
    std::vector<std::vector<Neighbor>> neighbors_;
    std::vector<double> degrees_;
};

/// Validating constructor. Rejects self-loops, nonpositive weights, duplicate
/// unordered pairs, out-of-range indices and n < 2.
Topology build_topology(std::size_t n, std::span<const WeightedEdge> edges);

struct LaplacianView {
    Eigen::MatrixXd adjacency;  // P
    Eigen::MatrixXd degree;     // D = diag(p_1, ..., p_N)
    Eigen::MatrixXd laplacian;  // L = D - P
};

LaplacianView laplacian(const Topology& t);

bool is_connected(const Topology& t);

/// Hop distances from `source` to every agent (weights ignored). Unreachable
/// agents get SIZE_MAX.
std::vector<std::size_t> hop_distances(const Topology& t, std::size_t source);

/// Longest shortest path in hops. Throws Disconnected.
std::size_t diameter(const Topology& t);

/// y^T L y.
double laplacian_quadratic_form(const Eigen::MatrixXd& L, const Eigen::VectorXd& y);

/// 1/2 * sum over ordered pairs of p_ij (y_i - y_j)^2.
double pairwise_disagreement(const Topology& t, const Eigen::VectorXd& y);

/// Second-smallest eigenvalue of L.
double algebraic_connectivity(const Topology& t);

}  // namespace netcons
