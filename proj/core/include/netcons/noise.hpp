#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace netcons {

class Topology;

enum class NoiseDistribution { Zero, Gaussian, Uniform };

/// Additive value injected into one directed stream at one loop step. Used
/// to force truncations in synthetic scenarios.
struct NoiseSpike {
    std::int64_t step = 1;   // loop step k; perturbs the sample eps_{ij,k+1}
    std::size_t observer = 0;  // i
    std::size_t observed = 0;  // j
    double value = 0.0;
};

struct NoiseSpec {
    NoiseDistribution distribution = NoiseDistribution::Gaussian;
    double variance = 1.0;    // gaussian
    double half_width = 1.0;  // uniform(-a, a)
    std::uint64_t master_seed = 0;
    std::vector<NoiseSpike> spikes;

    static NoiseSpec zero() { return NoiseSpec{NoiseDistribution::Zero, 0.0, 0.0, 0, {}}; }
    static NoiseSpec gaussian(double variance, std::uint64_t seed) {
        return NoiseSpec{NoiseDistribution::Gaussian, variance, 0.0, seed, {}};
    }
};

/// SplitMix64 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the ordered pair (observer i, observed j), 0-based:
/// mix64(mix64(mix64(master) ^ i) ^ j).
constexpr std::uint64_t edge_seed(std::uint64_t master, std::size_t i, std::size_t j) noexcept {
    return mix64(mix64(mix64(master) ^ static_cast<std::uint64_t>(i)) ^ static_cast<std::uint64_t>(j));
}

/// Observation-noise sequence eps_{ij,k} for one ordered pair.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform reals take the top 53 bits: (x >> 11) * 2^-53. Gaussian
/// samples use the Marsaglia polar method on uniforms in (-1, 1), consuming
/// pairs and returning the cached second value on the next call. None of
/// this depends on implementation-defined <random> distributions, so a seed
/// reproduces the same stream on any conforming platform.
class EdgeStream {
public:
    EdgeStream(const NoiseSpec& spec, std::size_t observer, std::size_t observed);

    double sample();

    [[nodiscard]] std::size_t observer() const noexcept { return observer_; }
    [[nodiscard]] std::size_t observed() const noexcept { return observed_; }
    [[nodiscard]] std::int64_t count() const noexcept { return count_; }

private:
    double uniform01();
    double standard_normal();

    NoiseDistribution distribution_;
    double scale_;
    std::size_t observer_;
    std::size_t observed_;
    std::mt19937_64 engine_;
    std::optional<double> cached_normal_;
    std::vector<NoiseSpike> spikes_;
    std::int64_t count_ = 0;
};

/// Stream for observer i watching neighbor j. Throws NotAnEdge when i and j
/// are not adjacent.
EdgeStream stream_for(const NoiseSpec& spec, const Topology& topology, std::size_t i, std::size_t j);

}  // namespace netcons
