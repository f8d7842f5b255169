#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace netcons::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kIo = 3 };

struct RunOptions {
    std::optional<int> case_number;
    std::optional<std::string> scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> horizon;
    std::optional<std::int64_t> stride;
    std::string out = "results";
    bool noise_off = false;
    bool lenient = false;
};

struct BatchOptions {
    RunOptions base;
    std::vector<std::uint64_t> seeds;
    std::size_t workers = 0;
};

struct VerifyOptions {
    std::string log;
};

struct PlotOptions {
    std::string log;
    std::optional<std::string> out;
    int per_decade = 200;
};

int cmd_run(const RunOptions& opt);
int cmd_batch(const BatchOptions& opt);
int cmd_verify(const VerifyOptions& opt);
int cmd_plotdata(const PlotOptions& opt);

}  // namespace netcons::cli
