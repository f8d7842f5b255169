#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "netcons/errors.hpp"
#include "netcons/graph.hpp"
#include "oracles.hpp"

using namespace netcons;

namespace {

std::vector<WeightedEdge> reference_edges() { return {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {0, 3, 1.0}}; }

ErrorCode code_of(std::size_t n, std::vector<WeightedEdge> edges) {
    try {
        (void)build_topology(n, edges);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected build_topology to throw";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Topology, ReferenceGraphDegrees) {
    const auto t = build_topology(4, reference_edges());
    EXPECT_EQ(t.degree(0), 2.0);
    EXPECT_EQ(t.degree(1), 3.0);
    EXPECT_EQ(t.degree(2), 1.0);
    EXPECT_EQ(t.degree(3), 2.0);
    ASSERT_EQ(t.neighbors(1).size(), 3u);
    EXPECT_EQ(t.neighbors(1)[0].index, 0u);
    EXPECT_EQ(t.neighbors(1)[2].index, 3u);
}

TEST(Topology, PathOfTwo) {
    const std::vector<WeightedEdge> e{{0, 1, 1.0}};
    const auto t = build_topology(2, e);
    EXPECT_EQ(t.degree(0), 1.0);
    EXPECT_EQ(t.degree(1), 1.0);
    EXPECT_TRUE(is_connected(t));
}

TEST(Topology, RejectsBadEdges) {
    EXPECT_EQ(code_of(3, {{0, 0, 1.0}}), ErrorCode::SelfLoop);
    EXPECT_EQ(code_of(3, {{0, 1, 0.0}}), ErrorCode::NonpositiveWeight);
    EXPECT_EQ(code_of(3, {{0, 1, -2.0}}), ErrorCode::NonpositiveWeight);
    EXPECT_EQ(code_of(3, {{0, 1, 1.0}, {1, 0, 2.0}}), ErrorCode::DuplicateEdge);
    EXPECT_EQ(code_of(3, {{0, 3, 1.0}}), ErrorCode::IndexOutOfRange);
    EXPECT_EQ(code_of(1, {}), ErrorCode::InvalidArgument);
}

TEST(Topology, WeightsAreSymmetric) {
    const std::vector<WeightedEdge> e{{2, 0, 0.7}, {1, 2, 1.5}};
    const auto t = build_topology(3, e);
    EXPECT_EQ(t.weight(0, 2), 0.7);
    EXPECT_EQ(t.weight(2, 0), 0.7);
    EXPECT_EQ(t.weight(0, 1), 0.0);
    EXPECT_FALSE(t.adjacent(0, 1));
    const Eigen::MatrixXd P = t.adjacency();
    EXPECT_TRUE(P.isApprox(P.transpose()));
}

TEST(Laplacian, ReferenceMatrix) {
    const auto view = laplacian(build_topology(4, reference_edges()));
    Eigen::MatrixXd expected(4, 4);
    expected << 2, -1, 0, -1, -1, 3, -1, -1, 0, -1, 1, 0, -1, -1, 0, 2;
    EXPECT_EQ(view.laplacian, expected);
    EXPECT_EQ(view.laplacian, view.degree - view.adjacency);
}

TEST(Laplacian, SingleWeightedEdge) {
    const std::vector<WeightedEdge> e{{0, 1, 2.5}};
    const auto L = laplacian(build_topology(2, e)).laplacian;
    Eigen::MatrixXd expected(2, 2);
    expected << 2.5, -2.5, -2.5, 2.5;
    EXPECT_EQ(L, expected);
}

TEST(Laplacian, QuadraticFormOnUnitVector) {
    const auto t = build_topology(4, reference_edges());
    Eigen::VectorXd y = Eigen::VectorXd::Zero(4);
    y(0) = 1.0;
    EXPECT_DOUBLE_EQ(laplacian_quadratic_form(laplacian(t).laplacian, y), 2.0);
    EXPECT_DOUBLE_EQ(pairwise_disagreement(t, y), 2.0);
}

TEST(LaplacianProperty, QuadraticFormMatchesPairwiseSum) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 9;
        const auto edges = oracle::random_connected_edges(n, rng);
        const auto t = build_topology(n, edges);
        const auto L = laplacian(t).laplacian;
        std::vector<double> y(n);
        for (auto& v : y) v = gauss(rng);
        const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n));
        const double expected = oracle::pairwise_sum(edges, y);
        EXPECT_NEAR(laplacian_quadratic_form(L, yv), expected, 1e-10 * (1.0 + expected));
        EXPECT_NEAR(pairwise_disagreement(t, yv), expected, 1e-10 * (1.0 + expected));
        EXPECT_LE((L * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n))).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_TRUE(L.isApprox(L.transpose()));
    }
}

TEST(LaplacianProperty, FiedlerValuePositiveWhenConnected) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 10;
        const auto t = build_topology(n, oracle::random_connected_edges(n, rng, 0.1));
        EXPECT_GT(algebraic_connectivity(t), 1e-9);
    }
    const std::vector<WeightedEdge> split{{0, 1, 1.0}, {2, 3, 1.0}};
    EXPECT_LT(std::abs(algebraic_connectivity(build_topology(4, split))), 1e-9);
}

TEST(Diameter, SmallGraphs) {
    EXPECT_EQ(diameter(build_topology(4, reference_edges())), 2u);
    const std::vector<WeightedEdge> k3{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    EXPECT_EQ(diameter(build_topology(3, k3)), 1u);
    const std::vector<WeightedEdge> path{{0, 1, 1.0}, {1, 2, 5.0}};
    EXPECT_EQ(diameter(build_topology(3, path)), 2u);
}

TEST(Diameter, MatchesFloydWarshall) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 12;
        const auto edges = oracle::random_connected_edges(n, rng, 0.15);
        const auto d = diameter(build_topology(n, edges));
        EXPECT_EQ(d, oracle::diameter_floyd(n, edges));
        EXPECT_GE(d, 1u);
        EXPECT_LE(d, n - 1);
    }
}

TEST(Connectivity, DetectsIsolatedAgents) {
    EXPECT_TRUE(is_connected(build_topology(4, reference_edges())));
    const std::vector<WeightedEdge> one{{0, 1, 1.0}};
    const auto t = build_topology(4, one);
    EXPECT_FALSE(is_connected(t));
    try {
        (void)diameter(t);
        FAIL() << "expected Disconnected";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Disconnected);
    }
    const auto hops = hop_distances(t, 0);
    EXPECT_EQ(hops[1], 1u);
    EXPECT_EQ(hops[2], SIZE_MAX);
}
