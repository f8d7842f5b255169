#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "netcons/analysis.hpp"
#include "netcons/controller.hpp"
#include "netcons/graph.hpp"
#include "netcons/noise.hpp"
#include "netcons/plant.hpp"

namespace netcons {

struct PlantSpec {
    PlantKind kind = PlantKind::Hammerstein;
    Polynomial C;
    Polynomial D;
    Nonlinearity f;
};

struct ControllerSpec {
    std::vector<double> u_star;
    double c_M = 55.0;
    std::optional<std::vector<double>> initial_u;  // defaults to u_star
};

/// Everything needed to reproduce a run apart from the master seed override.
/// Edges are 0-based here; the JSON form is 1-based.
struct Scenario {
    std::string label;
    std::int64_t horizon = 100000;
    std::int64_t log_stride = 1;
    std::size_t agents = 0;
    std::vector<WeightedEdge> edges;
    std::vector<PlantSpec> plants;
    ControllerSpec controller;
    NoiseSpec noise;
};

/// The three reference cases on the four-agent graph: all Hammerstein (1),
/// all Wiener (2), Wiener agents 1-2 with Hammerstein agents 3-4 (3).
/// Throws InvalidArgument for any other number.
Scenario builtin_case(int number);

/// Two memoryless identity plants on one edge; reduces the loop to plain
/// first-order consensus.
Scenario identity_pair_scenario();

/// JSON scenario document:
///   {label, horizon, log_stride, topology: [[i, j, w], ...],
///    agents: [{kind, C, D, f: {name, params}}, ...],
///    controller: {u_star, c_M, initial_u},
///    noise: {dist, params, seed, spikes}}
/// Indices are 1-based. Unknown keys are rejected with ParseError.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

/// 64-bit FNV-1a of the canonical JSON dump.
std::uint64_t scenario_hash(const Scenario& s);

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    [[nodiscard]] bool ok() const noexcept { return errors.empty(); }
};

/// Structural checks (graph, dimensions, c_M against u*) are always errors.
/// Plant stability and gain monotonicity are errors in strict mode and
/// warnings otherwise.
ValidationReport validate(const Scenario& s, bool strict = true);

/// Throws ValidationError listing every problem when validation fails.
void require_valid(const Scenario& s, bool strict = true);

Topology scenario_topology(const Scenario& s);
SystemModel system_model(const Scenario& s);

}  // namespace netcons
