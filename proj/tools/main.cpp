#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace netcons::cli;

    CLI::App app{"Networked Hammerstein/Wiener consensus simulator"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Simulate a built-in case or a scenario file");
    auto* case_opt = run_cmd->add_option("--case", run.case_number, "Built-in case 1, 2 or 3");
    auto* scen_opt = run_cmd->add_option("--scenario", run.scenario_path, "Scenario JSON file");
    case_opt->excludes(scen_opt);
    run_cmd->add_option("--seed", run.seed, "Noise master seed");
    run_cmd->add_option("--horizon", run.horizon, "Number of steps K")->check(CLI::PositiveNumber);
    run_cmd->add_option("--stride", run.stride, "CSV log stride")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_flag("--noise-off", run.noise_off, "Zero observation noise");
    run_cmd->add_flag("--lenient", run.lenient, "Downgrade stability and monotonicity failures to warnings");

    BatchOptions batch;
    auto* batch_cmd = app.add_subcommand("batch", "Run several seeds in parallel");
    auto* bcase = batch_cmd->add_option("--case", batch.base.case_number, "Built-in case 1, 2 or 3");
    auto* bscen = batch_cmd->add_option("--scenario", batch.base.scenario_path, "Scenario JSON file");
    bcase->excludes(bscen);
    batch_cmd->add_option("--seeds", batch.seeds, "Seeds")->required();
    batch_cmd->add_option("--workers", batch.workers, "Worker threads (0 = all cores)");
    batch_cmd->add_option("--horizon", batch.base.horizon, "Number of steps K")->check(CLI::PositiveNumber);
    batch_cmd->add_option("--stride", batch.base.stride, "CSV log stride")->check(CLI::PositiveNumber);
    batch_cmd->add_option("--out", batch.base.out, "Output directory; one subdirectory per seed");
    batch_cmd->add_flag("--noise-off", batch.base.noise_off, "Zero observation noise");
    batch_cmd->add_flag("--lenient", batch.base.lenient, "Downgrade stability and monotonicity failures to warnings");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Check the analytic identities on a stride-1 log");
    verify_cmd->add_option("--log", verify.log, "Run directory")->required();

    PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plotdata", "Write downsampled input/output series");
    plot_cmd->add_option("--log", plot.log, "Run directory")->required();
    plot_cmd->add_option("--out", plot.out, "Output directory (defaults to the run directory)");
    plot_cmd->add_option("--per-decade", plot.per_decade, "Samples per decade of k")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    if (run_cmd->parsed()) return cmd_run(run);
    if (batch_cmd->parsed()) return cmd_batch(batch);
    if (verify_cmd->parsed()) return cmd_verify(verify);
    if (plot_cmd->parsed()) return cmd_plotdata(plot);
    std::cerr << app.help();
    return kValidation;
}
