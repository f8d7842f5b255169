#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "netcons/analysis.hpp"
#include "netcons/errors.hpp"
#include "netcons/log_io.hpp"
#include "netcons/scenario.hpp"
#include "netcons/simulation.hpp"

namespace netcons::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kRecursionTolerance = 1e-9;
constexpr double kDecompositionTolerance = 1e-10;
constexpr std::int64_t kVerifyMaxSteps = 200000;
constexpr std::int64_t kHorizonCheckMaxK = 1000;
constexpr double kHorizonCheckTs[] = {0.1, 0.5, 1.0, 2.0};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Scenario resolve_scenario(const RunOptions& opt) {
    Scenario s;
    if (opt.case_number) {
        if (*opt.case_number < 1 || *opt.case_number > 3) {
            throw UsageError("--case must be 1, 2 or 3 (got " + std::to_string(*opt.case_number) + ")");
        }
        s = builtin_case(*opt.case_number);
    } else if (opt.scenario_path) {
        s = load_scenario(*opt.scenario_path);
    } else {
        throw UsageError("one of --case or --scenario is required");
    }
    if (opt.horizon) s.horizon = *opt.horizon;
    if (opt.stride) s.log_stride = *opt.stride;
    if (opt.noise_off) s = without_noise(s);
    if (opt.seed) s.noise.master_seed = *opt.seed;

    const auto report = validate(s, !opt.lenient);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    if (!report.ok()) {
        std::string msg;
        for (const auto& e : report.errors) msg += "\n  " + e;
        throw Error(ErrorCode::ValidationError, "scenario rejected:" + msg);
    }
    return s;
}

int setup_error_code(const Error& e) {
    switch (e.code()) {
        case ErrorCode::IoError: return kIo;
        case ErrorCode::ValidationError:
        case ErrorCode::ParseError:
        case ErrorCode::InvalidArgument:
        case ErrorCode::SelfLoop:
        case ErrorCode::NonpositiveWeight:
        case ErrorCode::DuplicateEdge:
        case ErrorCode::IndexOutOfRange:
        case ErrorCode::Disconnected:
        case ErrorCode::ZeroDCGain: return kValidation;
        default: return kRuntime;
    }
}

void print_usage_hint() {
    std::cerr << "usage: netcons run (--case {1|2|3} | --scenario <path>) [--seed N] [--horizon K] [--out DIR]"
                 " [--noise-off] [--stride S] [--lenient]\n";
}

void print_summary(const RunSummary& s, const fs::path& dir) {
    std::printf("%s seed=%llu K=%lld\n", s.label.c_str(), static_cast<unsigned long long>(s.seed),
                static_cast<long long>(s.steps_completed));
    std::printf("  final spread   %.6g\n", s.final_spread);
    std::printf("  final residual %.6g\n", s.final_residual);
    std::printf("  sigma_bar      %lld\n", static_cast<long long>(s.sigma_bar_final));
    std::printf("  wall time      %.3f s\n", s.wall_time);
    std::printf("  written to     %s\n", dir.string().c_str());
}

}  // namespace

int cmd_run(const RunOptions& opt) {
    Scenario s;
    try {
        s = resolve_scenario(opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        print_usage_hint();
        return kValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return setup_error_code(e);
    }

    RunResult r;
    try {
        r = run(s, s.noise.master_seed);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::ValidationError ? kValidation : kRuntime;
    }
    try {
        write_run(opt.out, s, r);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    print_summary(r.summary, opt.out);
    if (r.summary.aborted) {
        std::cerr << "run aborted: " << r.summary.diagnostic << '\n';
        return kRuntime;
    }
    return kOk;
}

int cmd_batch(const BatchOptions& opt) {
    Scenario s;
    try {
        s = resolve_scenario(opt.base);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return setup_error_code(e);
    }

    BatchResult result;
    try {
        result = batch(s, opt.seeds, opt.workers);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return setup_error_code(e);
    }
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

    int code = kOk;
    for (std::size_t idx = 0; idx < result.runs.size(); ++idx) {
        const auto& r = result.runs[idx];
        const fs::path dir = fs::path(opt.base.out) / ("seed_" + std::to_string(opt.seeds[idx]) + "_" + std::to_string(idx));
        if (r.log.empty()) continue;
        try {
            write_run(dir, s, r);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kIo;
        }
        print_summary(r.summary, dir);
        if (r.summary.aborted) code = kRuntime;
    }
    for (const auto& e : result.errors) std::cerr << "error: " << e << '\n';
    if (!result.errors.empty()) code = kRuntime;
    return code;
}

int cmd_verify(const VerifyOptions& opt) {
    LoadedRun loaded;
    try {
        loaded = read_log_dir(opt.log);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    auto& log = loaded.log;
    if (loaded.stride != 1 || !log.is_complete() || log.empty()) {
        std::cerr << "error: verification requires stride 1 (the log must hold every step with edge data)\n";
        return kValidation;
    }
    if (log.last_step() > kVerifyMaxSteps) {
        std::cerr << "error: verification is capped at K = " << kVerifyMaxSteps << '\n';
        return kValidation;
    }

    nlohmann::json report;
    bool all_pass = true;
    try {
        const auto model = system_model(loaded.scenario);

        const auto aux = build_auxiliary(log, model);
        const auto rc = verify_centralized_recursion(aux, model, kRecursionTolerance);
        const auto landings = catch_up_landings(log);
        const auto catch_up_resets = catch_up_truncations(log);
        const double obs_err = max_observation_structure_error(aux, log, model);

        const auto times = truncation_times(log);
        const auto d = diameter(model.topology);
        const std::int64_t last_time = log.has_final_state() ? log.last_step() + 1 : log.last_step();
        const auto lag = check_diameter_bound(times, d, last_time);

        bool horizon_ok = true;
        for (double T : kHorizonCheckTs) {
            for (std::int64_t k = 1; k <= kHorizonCheckMaxK; ++k) {
                if (!m_of_within_bounds(k, T, m_of(k, T).m)) horizon_ok = false;
            }
        }

        const double decomposition = max_decomposition_error(log, model);
        const bool decomposition_ok = decomposition < kDecompositionTolerance;

        all_pass = rc.pass && lag.ok && horizon_ok && decomposition_ok;

        std::printf("%-34s %-5s %s\n", "identity", "", "detail");
        std::printf("%-34s %-5s max residual %.3e (tol %.0e) at k=%lld agent %zu, sigma mismatches %lld\n",
                    "centralized recursion", rc.pass ? "PASS" : "FAIL", rc.max_abs_residual, kRecursionTolerance,
                    static_cast<long long>(rc.worst_step), rc.worst_agent + 1,
                    static_cast<long long>(rc.sigma_mismatches));
        std::printf("%-34s %-5s max gap %lld over %lld levels (diameter %zu)\n", "truncation lag <= diameter",
                    lag.ok ? "PASS" : "FAIL", static_cast<long long>(lag.max_gap),
                    static_cast<long long>(lag.levels_checked), d);
        std::printf("%-34s %-5s k = 1..%lld, T in {0.1, 0.5, 1, 2}\n", "step-horizon bounds",
                    horizon_ok ? "PASS" : "FAIL", static_cast<long long>(kHorizonCheckMaxK));
        std::printf("%-34s %-5s max error %.3e (tol %.0e)\n", "noise decomposition", decomposition_ok ? "PASS" : "FAIL",
                    decomposition, kDecompositionTolerance);
        std::printf("diagnostics: %zu catch-up steps kept u* + a_k O, %zu truncated; "
                    "observation structure error %.3e\n",
                    landings.size(), catch_up_resets.size(), obs_err);

        report = {{"recursion_residual", rc.max_abs_residual},
                  {"recursion_pass", rc.pass},
                  {"recursion_worst_step", rc.worst_step},
                  {"recursion_worst_agent", rc.worst_agent + 1},
                  {"recursion_sigma_mismatches", rc.sigma_mismatches},
                  {"catch_up_landings", landings.size()},
                  {"catch_up_truncations", catch_up_resets.size()},
                  {"observation_structure_error", obs_err},
                  {"diameter", d},
                  {"diameter_bound_ok", lag.ok},
                  {"diameter_bound_max_gap", lag.max_gap},
                  {"diameter_bound_levels", lag.levels_checked},
                  {"horizon_bounds_ok", horizon_ok},
                  {"decomposition_max_err", decomposition},
                  {"decomposition_ok", decomposition_ok},
                  {"all_pass", all_pass}};
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }

    std::ofstream out(fs::path(opt.log) / "verification.json");
    if (!out) {
        std::cerr << "error: cannot write verification.json\n";
        return kIo;
    }
    out << report.dump(2) << '\n';
    std::printf("%s\n", all_pass ? "all identities hold" : "one or more identities failed");
    return all_pass ? kOk : kRuntime;
}

int cmd_plotdata(const PlotOptions& opt) {
    LoadedRun loaded;
    try {
        loaded = read_log_dir(opt.log);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    try {
        const auto paths = write_plotdata(loaded.log, opt.out ? fs::path(*opt.out) : fs::path(opt.log), opt.per_decade);
        for (const auto& p : paths) std::printf("wrote %s\n", p.string().c_str());
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    return kOk;
}

}  // namespace netcons::cli
