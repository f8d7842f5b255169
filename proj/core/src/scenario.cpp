#include "netcons/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "netcons/errors.hpp"

namespace netcons {

using nlohmann::json;

namespace {

constexpr double kMonotoneGridLo = -50.0;
constexpr double kMonotoneGridHi = 50.0;
constexpr std::size_t kMonotoneGridPoints = 10000;
constexpr double kStabilityMargin = 1e-9;

std::vector<PlantSpec> reference_plants(const std::vector<PlantKind>& kinds) {
    std::vector<PlantSpec> plants{
        {kinds[0], Polynomial{1.0, 0.2, 0.0, 0.6}, Polynomial{1.0, -0.3, -1.2}, Nonlinearity::cubic_affine(-1.0, -1.0, 0.0)},
        {kinds[1], Polynomial{1.0, 0.6, 0.5, 0.4}, Polynomial{1.0, -1.0, -2.0}, Nonlinearity::affine(-2.0, 1.0)},
        {kinds[2], Polynomial{1.0, -0.15, 0.0, 0.5}, Polynomial{1.0, 0.2, -0.4}, Nonlinearity::shifted_cube(1.0)},
        {kinds[3], Polynomial{1.0, 0.76, 0.5, 0.6}, Polynomial{1.0, 0.5}, Nonlinearity::cubic_affine(1.0, 0.0, 1.0)},
    };
    return plants;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!obj.is_object()) throw Error(ErrorCode::ParseError, std::string(where) + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorCode::ParseError, "unknown key '" + key + "' in " + std::string(where));
        }
    }
}

const json& require_key(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key)) {
        throw Error(ErrorCode::ParseError, "missing key '" + std::string(key) + "' in " + std::string(where));
    }
    return obj.at(key);
}

double as_number(const json& v, std::string_view what) {
    if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a number");
    return v.get<double>();
}

std::int64_t as_integer(const json& v, std::string_view what) {
    if (!v.is_number_integer()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an integer");
    return v.get<std::int64_t>();
}

std::vector<double> as_numbers(const json& v, std::string_view what) {
    if (!v.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(as_number(x, what));
    return out;
}

std::size_t as_agent_index(const json& v, std::string_view what) {
    const auto idx = as_integer(v, what);
    if (idx < 1) throw Error(ErrorCode::ParseError, std::string(what) + " must be a 1-based agent index");
    return static_cast<std::size_t>(idx - 1);
}

Nonlinearity parse_nonlinearity(const json& f) {
    reject_unknown(f, {"name", "params"}, "nonlinearity");
    const auto name = require_key(f, "name", "nonlinearity").get<std::string>();
    const auto kind = nonlinearity_kind_from_name(name);
    const json params = f.contains("params") ? f.at("params") : json::object();
    auto param = [&](const char* key) { return as_number(require_key(params, key, name + " params"), key); };
    switch (kind) {
        case NonlinearityKind::Identity:
            reject_unknown(params, {}, "identity params");
            return Nonlinearity::identity();
        case NonlinearityKind::Affine:
            reject_unknown(params, {"beta", "gamma"}, "affine params");
            return Nonlinearity::affine(param("beta"), param("gamma"));
        case NonlinearityKind::CubicAffine:
            reject_unknown(params, {"alpha", "beta", "gamma"}, "cubic_affine params");
            return Nonlinearity::cubic_affine(param("alpha"), param("beta"), param("gamma"));
        case NonlinearityKind::ShiftedCube:
            reject_unknown(params, {"gamma"}, "shifted_cube params");
            return Nonlinearity::shifted_cube(param("gamma"));
    }
    return Nonlinearity::identity();
}

json nonlinearity_to_json(const Nonlinearity& f) {
    json params = json::object();
    switch (f.kind()) {
        case NonlinearityKind::Identity: break;
        case NonlinearityKind::Affine:
            params["beta"] = f.beta();
            params["gamma"] = f.gamma();
            break;
        case NonlinearityKind::CubicAffine:
            params["alpha"] = f.alpha();
            params["beta"] = f.beta();
            params["gamma"] = f.gamma();
            break;
        case NonlinearityKind::ShiftedCube: params["gamma"] = f.gamma(); break;
    }
    return json{{"name", std::string(f.name())}, {"params", params}};
}

PlantKind parse_kind(const json& v) {
    const auto s = v.get<std::string>();
    if (s == "H" || s == "hammerstein") return PlantKind::Hammerstein;
    if (s == "W" || s == "wiener") return PlantKind::Wiener;
    throw Error(ErrorCode::ParseError, "agent kind must be H or W, got '" + s + "'");
}

NoiseSpec parse_noise(const json& v) {
    reject_unknown(v, {"dist", "params", "seed", "spikes"}, "noise");
    NoiseSpec spec;
    const auto dist = require_key(v, "dist", "noise").get<std::string>();
    const json params = v.contains("params") ? v.at("params") : json::object();
    if (dist == "zero") {
        reject_unknown(params, {}, "zero noise params");
        spec = NoiseSpec::zero();
    } else if (dist == "gaussian") {
        reject_unknown(params, {"variance"}, "gaussian params");
        spec.distribution = NoiseDistribution::Gaussian;
        spec.variance = params.contains("variance") ? as_number(params.at("variance"), "variance") : 1.0;
    } else if (dist == "uniform") {
        reject_unknown(params, {"a"}, "uniform params");
        spec.distribution = NoiseDistribution::Uniform;
        spec.half_width = as_number(require_key(params, "a", "uniform params"), "a");
    } else {
        throw Error(ErrorCode::ParseError, "unknown noise distribution '" + dist + "'");
    }
    if (v.contains("seed")) {
        const auto& seed = v.at("seed");
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
            throw Error(ErrorCode::ParseError, "noise seed must be a non-negative integer");
        }
        spec.master_seed = seed.get<std::uint64_t>();
    }
    if (v.contains("spikes")) {
        for (const auto& s : v.at("spikes")) {
            reject_unknown(s, {"k", "i", "j", "value"}, "noise spike");
            NoiseSpike spike;
            spike.step = as_integer(require_key(s, "k", "noise spike"), "spike k");
            spike.observer = as_agent_index(require_key(s, "i", "noise spike"), "spike i");
            spike.observed = as_agent_index(require_key(s, "j", "noise spike"), "spike j");
            spike.value = as_number(require_key(s, "value", "noise spike"), "spike value");
            spec.spikes.push_back(spike);
        }
    }
    return spec;
}

json noise_to_json(const NoiseSpec& n) {
    json out;
    switch (n.distribution) {
        case NoiseDistribution::Zero:
            out["dist"] = "zero";
            out["params"] = json::object();
            break;
        case NoiseDistribution::Gaussian:
            out["dist"] = "gaussian";
            out["params"] = json{{"variance", n.variance}};
            break;
        case NoiseDistribution::Uniform:
            out["dist"] = "uniform";
            out["params"] = json{{"a", n.half_width}};
            break;
    }
    out["seed"] = n.master_seed;
    if (!n.spikes.empty()) {
        json spikes = json::array();
        for (const auto& s : n.spikes) {
            spikes.push_back({{"k", s.step}, {"i", s.observer + 1}, {"j", s.observed + 1}, {"value", s.value}});
        }
        out["spikes"] = spikes;
    }
    return out;
}

}  // namespace

Scenario builtin_case(int number) {
    using enum PlantKind;
    std::vector<PlantKind> kinds;
    switch (number) {
        case 1: kinds = {Hammerstein, Hammerstein, Hammerstein, Hammerstein}; break;
        case 2: kinds = {Wiener, Wiener, Wiener, Wiener}; break;
        case 3: kinds = {Wiener, Wiener, Hammerstein, Hammerstein}; break;
        default: throw Error(ErrorCode::InvalidArgument, "built-in cases are 1, 2 and 3; got " + std::to_string(number));
    }
    Scenario s;
    s.label = "case" + std::to_string(number);
    s.horizon = 100000;
    s.log_stride = 1;
    s.agents = 4;
    s.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {0, 3, 1.0}};
    s.plants = reference_plants(kinds);
    s.controller.u_star = {1.0, 2.0, 3.0, 4.0};
    s.controller.c_M = 55.0;
    s.controller.initial_u = std::vector<double>(4, 0.0);
    s.noise = NoiseSpec::gaussian(1.0, 1);
    return s;
}

Scenario identity_pair_scenario() {
    Scenario s;
    s.label = "identity_pair";
    s.horizon = 100000;
    s.agents = 2;
    s.edges = {{0, 1, 1.0}};
    s.plants = {{PlantKind::Hammerstein, Polynomial{1.0}, Polynomial{1.0}, Nonlinearity::identity()},
                {PlantKind::Hammerstein, Polynomial{1.0}, Polynomial{1.0}, Nonlinearity::identity()}};
    s.controller.u_star = {1.0, 2.0};
    s.controller.c_M = 55.0;
    s.controller.initial_u = std::vector<double>{3.0, -1.0};
    s.noise = NoiseSpec::zero();
    return s;
}

Scenario scenario_from_json(const json& doc) {
    reject_unknown(doc, {"label", "horizon", "log_stride", "topology", "agents", "controller", "noise"}, "scenario");
    Scenario s;
    if (doc.contains("label")) s.label = doc.at("label").get<std::string>();
    if (doc.contains("horizon")) s.horizon = as_integer(doc.at("horizon"), "horizon");
    if (doc.contains("log_stride")) s.log_stride = as_integer(doc.at("log_stride"), "log_stride");

    const auto& agents = require_key(doc, "agents", "scenario");
    if (!agents.is_array()) throw Error(ErrorCode::ParseError, "agents must be an array");
    for (const auto& a : agents) {
        reject_unknown(a, {"kind", "C", "D", "f"}, "agent");
        PlantSpec p;
        p.kind = parse_kind(require_key(a, "kind", "agent"));
        p.C = Polynomial(as_numbers(require_key(a, "C", "agent"), "C"));
        p.D = Polynomial(as_numbers(require_key(a, "D", "agent"), "D"));
        p.f = parse_nonlinearity(require_key(a, "f", "agent"));
        s.plants.push_back(std::move(p));
    }
    s.agents = s.plants.size();

    const auto& topo = require_key(doc, "topology", "scenario");
    if (!topo.is_array()) throw Error(ErrorCode::ParseError, "topology must be an array of [i, j, w]");
    for (const auto& e : topo) {
        if (!e.is_array() || e.size() != 3) throw Error(ErrorCode::ParseError, "topology entries are [i, j, w]");
        s.edges.push_back({as_agent_index(e[0], "edge i"), as_agent_index(e[1], "edge j"), as_number(e[2], "edge weight")});
    }

    const auto& ctrl = require_key(doc, "controller", "scenario");
    reject_unknown(ctrl, {"u_star", "c_M", "initial_u"}, "controller");
    s.controller.u_star = as_numbers(require_key(ctrl, "u_star", "controller"), "u_star");
    s.controller.c_M = as_number(require_key(ctrl, "c_M", "controller"), "c_M");
    if (ctrl.contains("initial_u") && !ctrl.at("initial_u").is_null()) {
        s.controller.initial_u = as_numbers(ctrl.at("initial_u"), "initial_u");
    }

    s.noise = doc.contains("noise") ? parse_noise(doc.at("noise")) : NoiseSpec::zero();
    return s;
}

json scenario_to_json(const Scenario& s) {
    json doc;
    doc["label"] = s.label;
    doc["horizon"] = s.horizon;
    doc["log_stride"] = s.log_stride;
    json topo = json::array();
    for (const auto& e : s.edges) topo.push_back(json::array({e.i + 1, e.j + 1, e.weight}));
    doc["topology"] = topo;
    json agents = json::array();
    for (const auto& p : s.plants) {
        agents.push_back({{"kind", p.kind == PlantKind::Hammerstein ? "H" : "W"},
                          {"C", p.C.coeffs()},
                          {"D", p.D.coeffs()},
                          {"f", nonlinearity_to_json(p.f)}});
    }
    doc["agents"] = agents;
    doc["controller"] = {{"u_star", s.controller.u_star}, {"c_M", s.controller.c_M}};
    doc["controller"]["initial_u"] = s.controller.initial_u ? json(*s.controller.initial_u) : json(nullptr);
    doc["noise"] = noise_to_json(s.noise);
    return doc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open scenario file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    try {
        return scenario_from_json(doc);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

std::uint64_t scenario_hash(const Scenario& s) {
    const auto text = scenario_to_json(s).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ValidationReport validate(const Scenario& s, bool strict) {
    ValidationReport report;
    auto& soft = strict ? report.errors : report.warnings;

    if (s.agents < 2) report.errors.push_back("need at least 2 agents");
    if (s.plants.size() != s.agents) report.errors.push_back("one plant per agent required");
    if (s.horizon < 1) report.errors.push_back("horizon must be >= 1");
    if (s.log_stride < 1) report.errors.push_back("log_stride must be >= 1");

    try {
        const auto t = build_topology(s.agents, s.edges);
        if (!is_connected(t)) report.errors.push_back("communication graph is disconnected");
        for (const auto& spike : s.noise.spikes) {
            if (spike.observer >= s.agents || spike.observed >= s.agents || !t.adjacent(spike.observer, spike.observed)) {
                report.errors.push_back("noise spike on a pair that is not an edge");
            }
            if (spike.step < 1) report.errors.push_back("noise spike step must be >= 1");
        }
    } catch (const Error& e) {
        report.errors.push_back(e.what());
    }

    const auto& ctrl = s.controller;
    if (ctrl.u_star.size() != s.agents) report.errors.push_back("u_star needs one entry per agent");
    if (ctrl.initial_u && ctrl.initial_u->size() != s.agents) {
        report.errors.push_back("initial_u needs one entry per agent");
    }
    if (!(ctrl.c_M > 0.0)) {
        report.errors.push_back("c_M must be > 0");
    } else {
        const double m0 = std::log(ctrl.c_M);
        for (double u : ctrl.u_star) {
            if (!(std::abs(u) < m0)) {
                std::ostringstream os;
                os << "ln(c_M) = " << m0 << " does not exceed |u*| = " << std::abs(u);
                report.errors.push_back(os.str());
                break;
            }
        }
        if (ctrl.initial_u) {
            for (double u : *ctrl.initial_u) {
                if (!(std::abs(u) < m0)) {
                    report.warnings.push_back("initial_u lies outside the first truncation bound");
                    break;
                }
            }
        }
    }

    if (s.noise.distribution == NoiseDistribution::Gaussian && !(s.noise.variance >= 0.0)) {
        report.errors.push_back("gaussian variance must be >= 0");
    }
    if (s.noise.distribution == NoiseDistribution::Uniform && !(s.noise.half_width >= 0.0)) {
        report.errors.push_back("uniform half-width must be >= 0");
    }

    for (std::size_t i = 0; i < s.plants.size(); ++i) {
        const auto& p = s.plants[i];
        const auto tag = "agent " + std::to_string(i + 1) + ": ";
        try {
            if (!check_stability(p.C, kStabilityMargin).stable) soft.push_back(tag + "C(z) has a root in the closed unit disk");
        } catch (const Error& e) {
            soft.push_back(tag + e.what());
        }
        try {
            const auto h = static_gain(p.kind, p.C, p.D, p.f);
            if (!is_strictly_increasing(h, kMonotoneGridLo, kMonotoneGridHi, kMonotoneGridPoints)) {
                soft.push_back(tag + "static gain is not strictly increasing");
            }
        } catch (const Error& e) {
            report.errors.push_back(tag + e.what());
        }
    }
    return report;
}

void require_valid(const Scenario& s, bool strict) {
    const auto report = validate(s, strict);
    if (report.ok()) return;
    std::string msg;
    for (const auto& e : report.errors) msg += (msg.empty() ? "" : "; ") + e;
    throw Error(ErrorCode::ValidationError, msg);
}

Topology scenario_topology(const Scenario& s) { return build_topology(s.agents, s.edges); }

SystemModel system_model(const Scenario& s) {
    SystemModel model{scenario_topology(s), {}, s.controller.u_star, Schedule{s.controller.c_M}};
    for (const auto& p : s.plants) model.gains.push_back(static_gain(p.kind, p.C, p.D, p.f));
    return model;
}

}  // namespace netcons
