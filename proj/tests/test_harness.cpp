#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "netcons/analysis.hpp"
#include "netcons/errors.hpp"
#include "netcons/log_io.hpp"
#include "netcons/scenario.hpp"
#include "netcons/simulation.hpp"

using namespace netcons;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::InvalidArgument;
}

std::string trajectory_bytes(const RunResult& r) {
    std::ostringstream out;
    write_trajectory_csv(out, r.log);
    write_edges_csv(out, r.log);
    return out.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("netcons_harness_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Builtin, ReferenceAgents) {
    const auto c1 = builtin_case(1);
    ASSERT_EQ(c1.agents, 4u);
    EXPECT_EQ(c1.plants[0].kind, PlantKind::Hammerstein);
    EXPECT_EQ(c1.plants[0].C.coeffs(), (std::vector<double>{1.0, 0.2, 0.0, 0.6}));
    EXPECT_EQ(c1.plants[0].D.coeffs(), (std::vector<double>{1.0, -0.3, -1.2}));
    EXPECT_EQ(c1.plants[0].f, Nonlinearity::cubic_affine(-1.0, -1.0, 0.0));
    EXPECT_EQ(c1.controller.u_star, (std::vector<double>{1.0, 2.0, 3.0, 4.0}));
    EXPECT_EQ(c1.controller.c_M, 55.0);

    const auto c3 = builtin_case(3);
    EXPECT_EQ(c3.plants[2].kind, PlantKind::Hammerstein);
    EXPECT_EQ(c3.plants[2].f, Nonlinearity::shifted_cube(1.0));
    EXPECT_EQ(c3.plants[0].kind, PlantKind::Wiener);

    EXPECT_EQ(builtin_case(2).plants[3].kind, PlantKind::Wiener);
    EXPECT_EQ(code_of([] { (void)builtin_case(4); }), ErrorCode::InvalidArgument);
    for (int c = 1; c <= 3; ++c) EXPECT_TRUE(validate(builtin_case(c)).ok()) << c;
}

TEST(ScenarioJson, RoundTrip) {
    for (int c = 1; c <= 3; ++c) {
        auto s = builtin_case(c);
        s.noise.spikes.push_back({12, 1, 2, 3.5});
        const auto doc = scenario_to_json(s);
        const auto back = scenario_from_json(doc);
        EXPECT_EQ(scenario_to_json(back), doc);
        EXPECT_EQ(scenario_hash(back), scenario_hash(s));
    }
    auto s = builtin_case(1);
    const auto h = scenario_hash(s);
    s.controller.c_M = 56.0;
    EXPECT_NE(scenario_hash(s), h);
}

TEST(ScenarioJson, Rejections) {
    auto doc = scenario_to_json(builtin_case(1));
    doc["colour"] = "blue";
    EXPECT_EQ(code_of([&] { (void)scenario_from_json(doc); }), ErrorCode::ParseError);

    auto no_agents = scenario_to_json(builtin_case(1));
    no_agents.erase("agents");
    EXPECT_EQ(code_of([&] { (void)scenario_from_json(no_agents); }), ErrorCode::ParseError);

    auto bad_kind = scenario_to_json(builtin_case(1));
    bad_kind["agents"][0]["kind"] = "X";
    EXPECT_EQ(code_of([&] { (void)scenario_from_json(bad_kind); }), ErrorCode::ParseError);

    EXPECT_EQ(code_of([] { (void)load_scenario("/nonexistent/scenario.json"); }), ErrorCode::IoError);
}

TEST(Validation, RejectsBadScenarios) {
    auto unstable = builtin_case(1);
    unstable.plants[0].C = Polynomial{1.0, -2.0};
    EXPECT_FALSE(validate(unstable).ok());
    const auto lenient = validate(unstable, false);
    EXPECT_TRUE(lenient.ok());
    EXPECT_FALSE(lenient.warnings.empty());

    auto split = builtin_case(1);
    split.edges = {{0, 1, 1.0}, {2, 3, 1.0}};
    EXPECT_FALSE(validate(split, false).ok());

    auto tight = builtin_case(1);
    tight.controller.c_M = 50.0;  // ln 50 < 4
    EXPECT_FALSE(validate(tight, false).ok());
    EXPECT_EQ(code_of([&] { require_valid(tight); }), ErrorCode::ValidationError);

    auto short_star = builtin_case(2);
    short_star.controller.u_star.pop_back();
    EXPECT_FALSE(validate(short_star, false).ok());

    auto off_edge = builtin_case(1);
    off_edge.noise.spikes.push_back({3, 0, 2, 1.0});
    EXPECT_FALSE(validate(off_edge, false).ok());

    auto flat = builtin_case(1);
    flat.plants[1].D = Polynomial{1.0, -1.0};
    EXPECT_FALSE(validate(flat).ok());
}

TEST(Run, Deterministic) {
    auto s = builtin_case(3);
    s.horizon = 5000;
    const auto a = run(s, 11);
    const auto b = run(s, 11);
    EXPECT_EQ(trajectory_bytes(a), trajectory_bytes(b));
    const auto c = run(s, 12);
    EXPECT_NE(trajectory_bytes(a), trajectory_bytes(c));
}

TEST(Run, NoiseFreeReferenceCaseReachesConsensus) {
    const auto r = run(without_noise(builtin_case(1)), 0);
    EXPECT_EQ(r.summary.steps_completed, 100000);
    EXPECT_FALSE(r.summary.aborted);
    EXPECT_LT(r.summary.final_spread, 1e-2);
}

TEST(Run, IdentityPair) {
    const auto r = run(identity_pair_scenario(), 0);
    ASSERT_TRUE(r.log.has_final_state());
    EXPECT_LT(std::abs(r.log.final_u()[0] - r.log.final_u()[1]), 1e-3);
    EXPECT_NEAR(r.log.final_u()[0] + r.log.final_u()[1], 2.0, 1e-12);
}

TEST(Run, SummaryFields) {
    auto s = builtin_case(2);
    s.horizon = 3000;
    const auto r = run(s, 4);
    EXPECT_EQ(r.summary.seed, 4u);
    EXPECT_EQ(r.summary.horizon, 3000);
    EXPECT_EQ(r.summary.scenario_hash, scenario_hash(s));
    ASSERT_EQ(r.summary.final_sigma.size(), 4u);
    std::int64_t top = 0;
    for (auto v : r.summary.final_sigma) top = std::max(top, v);
    EXPECT_EQ(r.summary.sigma_bar_final, top);
    std::int64_t own = 0;
    for (auto v : r.summary.truncations) own += v;
    EXPECT_GE(own, top > 0 ? 1 : 0);
}

TEST(Run, AbortsOnOverflow) {
    auto s = identity_pair_scenario();
    s.plants[0].C = Polynomial{1.0, -1.5};
    s.horizon = 5000;
    RunResult r;
    const auto report = validate(s, false);
    ASSERT_TRUE(report.ok());
    r = run(s, 0);
    EXPECT_TRUE(r.summary.aborted);
    EXPECT_FALSE(r.summary.diagnostic.empty());
    EXPECT_LT(r.summary.steps_completed, 5000);
    EXPECT_EQ(static_cast<std::int64_t>(r.log.size()), r.summary.steps_completed);
}

TEST(Batch, SeedsInOrder) {
    auto s = builtin_case(1);
    s.horizon = 2000;
    const std::vector<std::uint64_t> seeds{5, 1, 9, 3, 7};
    const auto b = batch(s, seeds, 3);
    ASSERT_EQ(b.runs.size(), seeds.size());
    EXPECT_TRUE(b.errors.empty());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        EXPECT_EQ(b.runs[i].summary.seed, seeds[i]);
        EXPECT_EQ(trajectory_bytes(b.runs[i]), trajectory_bytes(run(s, seeds[i])));
    }
}

TEST(Batch, EmptyAndDuplicateSeeds) {
    auto s = builtin_case(1);
    s.horizon = 500;
    EXPECT_EQ(code_of([&] { (void)batch(s, std::vector<std::uint64_t>{}); }), ErrorCode::InvalidArgument);
    const std::vector<std::uint64_t> dup{2, 2};
    const auto b = batch(s, dup, 2);
    EXPECT_FALSE(b.warnings.empty());
    ASSERT_EQ(b.runs.size(), 2u);
    EXPECT_EQ(trajectory_bytes(b.runs[0]), trajectory_bytes(b.runs[1]));
}

TEST(LogIo, DoubleFormatting) {
    for (double x : {0.0, -0.0, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) {
        EXPECT_EQ(parse_double(format_double(x)), x);
    }
    EXPECT_EQ(code_of([] { (void)parse_double("1.5x"); }), ErrorCode::ParseError);
}

TEST(LogIo, RoundTripIsExact) {
    auto s = builtin_case(2);
    s.horizon = 1500;
    const auto r = run(s, 8);
    const auto dir = scratch("roundtrip");
    write_run(dir, s, r);
    for (const char* f : {"trajectory.csv", "edges.csv", "metrics.csv", "summary.json", "scenario.json"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    }
    const auto loaded = read_log_dir(dir);
    EXPECT_EQ(loaded.stride, 1);
    ASSERT_EQ(loaded.log.size(), r.log.size());
    for (std::int64_t k = 1; k <= s.horizon; ++k) {
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& a = r.log.at(k, i);
            const auto& b = loaded.log.at(k, i);
            EXPECT_EQ(a.u, b.u);
            EXPECT_EQ(a.sigma, b.sigma);
            EXPECT_EQ(a.sigma_prime, b.sigma_prime);
            EXPECT_EQ(a.u_prime, b.u_prime);
            EXPECT_EQ(a.y_next, b.y_next);
            EXPECT_EQ(a.O_next, b.O_next);
        }
        const auto ea = r.log.edges_at(k);
        const auto eb = loaded.log.edges_at(k);
        for (std::size_t c = 0; c < ea.size(); ++c) {
            EXPECT_EQ(ea[c].z, eb[c].z);
            EXPECT_EQ(ea[c].eps, eb[c].eps);
        }
    }
    EXPECT_EQ(loaded.log.final_u(), r.log.final_u());
    EXPECT_EQ(loaded.log.final_sigma(), r.log.final_sigma());
    EXPECT_EQ(loaded.scenario.noise.master_seed, 8u);
    EXPECT_EQ(loaded.summary.at("seed").get<std::uint64_t>(), 8u);
    fs::remove_all(dir);
}

TEST(LogIo, StridedFiles) {
    auto s = builtin_case(1);
    s.horizon = 100;
    s.log_stride = 10;
    const auto r = run(s, 1);
    const auto dir = scratch("strided");
    write_run(dir, s, r);
    const auto loaded = read_log_dir(dir);
    EXPECT_EQ(loaded.stride, 10);
    EXPECT_EQ(loaded.log.size(), 10u);
    EXPECT_TRUE(loaded.log.has_step(91));
    EXPECT_FALSE(loaded.log.has_step(2));
    EXPECT_FALSE(loaded.log.is_complete());
    fs::remove_all(dir);
}

TEST(LogIo, MissingAndMalformed) {
    EXPECT_EQ(code_of([] { (void)read_log_dir("/nonexistent/run"); }), ErrorCode::IoError);
    auto s = builtin_case(1);
    s.horizon = 20;
    const auto dir = scratch("malformed");
    write_run(dir, s, run(s, 1));
    {
        std::ofstream out(dir / "trajectory.csv");
        out << "k,agent,u\n1,1,0\n";
    }
    EXPECT_EQ(code_of([&] { (void)read_log_dir(dir); }), ErrorCode::ParseError);
    fs::remove(dir / "edges.csv");
    EXPECT_EQ(code_of([&] { (void)read_log_dir(dir); }), ErrorCode::IoError);
    fs::remove_all(dir);
}

TEST(PlotData, GeometricSteps) {
    for (std::int64_t K : {1, 2, 10, 999, 100000}) {
        const auto steps = geometric_steps(K);
        ASSERT_FALSE(steps.empty());
        EXPECT_EQ(steps.front(), 1);
        EXPECT_EQ(steps.back(), K);
        for (std::size_t i = 1; i < steps.size(); ++i) EXPECT_LT(steps[i - 1], steps[i]);
    }
    EXPECT_LT(geometric_steps(100000).size(), 1500u);
}

TEST(PlotData, Files) {
    auto s = builtin_case(1);
    s.horizon = 1000;
    const auto r = run(s, 2);
    const auto dir = scratch("plot");
    const auto files = write_plotdata(r.log, dir);
    ASSERT_EQ(files.size(), 2u);
    std::ifstream in(dir / "inputs.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "k,u_1,u_2,u_3,u_4");
    std::ifstream out(dir / "outputs.csv");
    std::getline(out, header);
    EXPECT_EQ(header, "k,y_1,y_2,y_3,y_4");
    EXPECT_EQ(code_of([&] { (void)write_plotdata(TrajectoryLog(4, {}), dir); }), ErrorCode::IoError);
    fs::remove_all(dir);
}

TEST(Batch, ReferenceCaseLogsPassRecursionCheck) {
    const auto s = builtin_case(2);
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    const auto b = batch(s, seeds);
    ASSERT_EQ(b.runs.size(), 5u);
    const auto model = system_model(s);
    for (const auto& r : b.runs) {
        ASSERT_TRUE(r.log.is_complete());
        const auto check = verify_centralized_recursion(build_auxiliary(r.log, model), model);
        EXPECT_TRUE(check.pass) << "seed " << r.summary.seed << ": residual " << check.max_abs_residual << " at k="
                                << check.worst_step;
    }
}
