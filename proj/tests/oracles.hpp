#pragma once

// Reference implementations that share no code with the library. Tests
// compare library output against these.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "netcons/graph.hpp"
#include "netcons/nonlinearity.hpp"
#include "netcons/plant.hpp"

namespace oracle {

// Roots of 1 + a_1 z + ... + a_n z^n by Durand-Kerner on the monic form.
inline std::vector<std::complex<double>> durand_kerner(std::vector<double> coeffs, int iters = 2000) {
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    const std::size_t n = coeffs.size() - 1;
    std::vector<std::complex<double>> roots(n);
    if (n == 0) return roots;
    const double lead = coeffs[n];
    auto p = [&](std::complex<double> z) {
        std::complex<double> acc = 0.0;
        for (std::size_t s = coeffs.size(); s-- > 0;) acc = acc * z + coeffs[s] / lead;
        return acc;
    };
    const std::complex<double> seed(0.4, 0.9);
    for (std::size_t r = 0; r < n; ++r) roots[r] = std::pow(seed, static_cast<double>(r)) * 2.0;
    for (int it = 0; it < iters; ++it) {
        double moved = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            std::complex<double> denom = 1.0;
            for (std::size_t q = 0; q < n; ++q) {
                if (q != r) denom *= roots[r] - roots[q];
            }
            const auto delta = p(roots[r]) / denom;
            roots[r] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-15) break;
    }
    return roots;
}

inline double min_modulus(const std::vector<std::complex<double>>& roots) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) m = std::min(m, std::abs(r));
    return m;
}

// Hop distances by Floyd-Warshall on an explicit edge list.
inline std::size_t diameter_floyd(std::size_t n, const std::vector<netcons::WeightedEdge>& edges) {
    const std::size_t inf = n + 1;
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& e : edges) d[e.i][e.j] = d[e.j][e.i] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    std::size_t best = 0;
    for (auto& row : d)
        for (auto v : row) best = std::max(best, v);
    return best;
}

// 0.5 * sum over ordered pairs of p_ij (y_i - y_j)^2, built from the raw edge list.
inline double pairwise_sum(const std::vector<netcons::WeightedEdge>& edges, const std::vector<double>& y) {
    double s = 0.0;
    for (const auto& e : edges) {
        const double d = y[e.i] - y[e.j];
        s += 0.5 * (e.weight * d * d + e.weight * d * d);
    }
    return s;
}

// Largest m with sum_{s=k}^{m} 1/s <= T, accumulated in long double.
inline std::int64_t harmonic_m(std::int64_t k, long double T) {
    long double sum = 0.0L;
    std::int64_t m = k - 1;
    while (sum + 1.0L / static_cast<long double>(m + 1) <= T) {
        sum += 1.0L / static_cast<long double>(m + 1);
        ++m;
    }
    return m;
}

// Output of C(z) w_{k+1} = D(z) x_k computed from the whole input history,
// indexing every past value explicitly.
struct HistoryFilter {
    std::vector<double> c, d;
    std::vector<double> x, w;  // x_1.., w_2..

    double push(double input) {
        x.push_back(input);
        const std::int64_t k = static_cast<std::int64_t>(x.size());  // index of this input
        auto x_at = [&](std::int64_t t) { return t >= 1 ? x[static_cast<std::size_t>(t - 1)] : 0.0; };
        auto w_at = [&](std::int64_t t) { return t >= 2 ? w[static_cast<std::size_t>(t - 2)] : 0.0; };
        double out = 0.0;
        for (std::size_t r = 0; r < d.size(); ++r) out += d[r] * x_at(k - static_cast<std::int64_t>(r));
        for (std::size_t s = 1; s < c.size(); ++s) out -= c[s] * w_at(k + 1 - static_cast<std::int64_t>(s));
        w.push_back(out);
        return out;
    }
};

// Antiderivative of a catalog nonlinearity.
inline double antiderivative(const netcons::Nonlinearity& f, double t) {
    using K = netcons::NonlinearityKind;
    switch (f.kind()) {
        case K::Identity: return 0.5 * t * t;
        case K::Affine: return 0.5 * f.beta() * t * t + f.gamma() * t;
        case K::CubicAffine: return 0.25 * f.alpha() * t * t * t * t + 0.5 * f.beta() * t * t + f.gamma() * t;
        case K::ShiftedCube: {
            const double s = t - f.gamma();
            return 0.25 * s * s * s * s;
        }
    }
    return 0.0;
}

// Closed-form integral of a static gain from a to b.
inline double gain_integral(const netcons::StaticGain& h, double a, double b) {
    const double r = h.d / h.c;
    if (h.kind == netcons::PlantKind::Hammerstein) return r * (antiderivative(h.f, b) - antiderivative(h.f, a));
    return (antiderivative(h.f, r * b) - antiderivative(h.f, r * a)) / r;
}

// Random connected graph: a random spanning tree plus extra edges.
inline std::vector<netcons::WeightedEdge> random_connected_edges(std::size_t n, std::mt19937_64& rng,
                                                                 double extra_prob = 0.3) {
    std::vector<netcons::WeightedEdge> edges;
    std::uniform_real_distribution<double> w(0.2, 3.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> pick(0, v - 1);
        const auto u = pick(rng);
        edges.push_back({u, v, w(rng)});
        used[u][v] = used[v][u] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!used[i][j] && coin(rng) < extra_prob) edges.push_back({i, j, w(rng)});
    return edges;
}

// Random stable denominator with roots of modulus in [1.2, 4].
inline netcons::Polynomial random_stable(std::mt19937_64& rng, std::size_t degree) {
    std::uniform_real_distribution<double> mod(1.2, 4.0);
    std::uniform_real_distribution<double> ang(0.05, 3.1);
    std::vector<std::complex<double>> roots;
    while (roots.size() < degree) {
        if (degree - roots.size() >= 2 && ang(rng) > 1.0) {
            roots.push_back(std::polar(mod(rng), ang(rng)));
            roots.push_back(std::conj(roots.back()));
        } else {
            roots.emplace_back(ang(rng) > 1.5 ? mod(rng) : -mod(rng), 0.0);
        }
    }
    std::vector<std::complex<double>> upper;
    for (const auto& r : roots) {
        if (r.imag() >= 0.0) upper.push_back(r);
    }
    return netcons::polynomial_from_roots(upper);
}

inline netcons::Polynomial random_numerator(std::mt19937_64& rng, std::size_t degree) {
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    std::vector<double> d{1.0};
    for (std::size_t r = 0; r < degree; ++r) d.push_back(coef(rng));
    return netcons::Polynomial(d);
}

inline netcons::Nonlinearity random_nonlinearity(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> p(-2.0, 2.0);
    switch (rng() % 4) {
        case 0: return netcons::Nonlinearity::identity();
        case 1: return netcons::Nonlinearity::affine(p(rng), p(rng));
        case 2: return netcons::Nonlinearity::cubic_affine(p(rng), p(rng), p(rng));
        default: return netcons::Nonlinearity::shifted_cube(p(rng));
    }
}

}  // namespace oracle
