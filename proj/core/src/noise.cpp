#include "netcons/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netcons/errors.hpp"
#include "netcons/graph.hpp"

namespace netcons {

EdgeStream::EdgeStream(const NoiseSpec& spec, std::size_t observer, std::size_t observed)
    : distribution_(spec.distribution),
      scale_(spec.distribution == NoiseDistribution::Gaussian  ? std::sqrt(spec.variance)
             : spec.distribution == NoiseDistribution::Uniform ? spec.half_width
                                                               : 0.0),
      observer_(observer),
      observed_(observed),
      engine_(edge_seed(spec.master_seed, observer, observed)) {
    for (const auto& spike : spec.spikes) {
        if (spike.observer == observer && spike.observed == observed) spikes_.push_back(spike);
    }
}

double EdgeStream::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double EdgeStream::standard_normal() {
    if (cached_normal_) {
        const double v = *cached_normal_;
        cached_normal_.reset();
        return v;
    }
    double a = 0.0, b = 0.0, s = 0.0;
    do {
        a = 2.0 * uniform01() - 1.0;
        b = 2.0 * uniform01() - 1.0;
        s = a * a + b * b;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = b * factor;
    return a * factor;
}

double EdgeStream::sample() {
    ++count_;
    double value = 0.0;
    switch (distribution_) {
        case NoiseDistribution::Zero: break;
        case NoiseDistribution::Gaussian: value = scale_ * standard_normal(); break;
        case NoiseDistribution::Uniform: value = scale_ * (2.0 * uniform01() - 1.0); break;
    }
    for (const auto& spike : spikes_) {
        if (spike.step == count_) value += spike.value;
    }
    return value;
}

EdgeStream stream_for(const NoiseSpec& spec, const Topology& topology, std::size_t i, std::size_t j) {
    if (i >= topology.size() || j >= topology.size() || !topology.adjacent(i, j)) {
        throw Error(ErrorCode::NotAnEdge, "no edge between agents " + std::to_string(i) + " and " + std::to_string(j));
    }
    return EdgeStream(spec, i, j);
}

}  // namespace netcons
