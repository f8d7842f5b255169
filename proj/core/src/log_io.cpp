#include "netcons/log_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "netcons/errors.hpp"

namespace netcons {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const kTrajectoryHeader = "k,agent,u,sigma,sigma_prime,u_prime,y_next,O_next";
const char* const kEdgesHeader = "k,i,j,z,eps";

bool keep(std::int64_t k, std::int64_t stride) { return (k - 1) % stride == 0; }

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    return out;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + p.string());
    return in;
}

json read_json(const fs::path& p) {
    auto in = open_in(p);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, p.string() + ": " + e.what());
    }
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::int64_t parse_int(std::string_view text) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ParseError, "bad integer '" + std::string(text) + "'");
    }
    return v;
}

struct CsvReader {
    std::ifstream in;
    fs::path path;
    std::string line;
    std::size_t line_no = 0;

    CsvReader(const fs::path& p, const char* header) : in(open_in(p)), path(p) {
        if (!std::getline(in, line) || line != header) {
            throw Error(ErrorCode::ParseError, p.string() + ": unexpected header");
        }
        line_no = 1;
    }

    bool next(std::vector<std::string_view>& fields, std::size_t expected) {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            fields = split(line);
            if (fields.size() != expected) {
                throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                                       std::to_string(expected) + " fields");
            }
            return true;
        }
        return false;
    }
};

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw Error(ErrorCode::InvalidArgument, "cannot format double");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ParseError, "bad number '" + std::string(text) + "'");
    }
    return v;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log, std::int64_t stride) {
    out << kTrajectoryHeader << '\n';
    for (std::size_t pos = 0; pos < log.size(); ++pos) {
        const auto k = log.steps()[pos];
        if (!keep(k, stride)) continue;
        const auto row = log.row(pos);
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& r = row[i];
            out << k << ',' << i + 1 << ',' << format_double(r.u) << ',' << r.sigma << ',' << r.sigma_prime << ','
                << format_double(r.u_prime) << ',' << format_double(r.y_next) << ',' << format_double(r.O_next) << '\n';
        }
    }
}

void write_edges_csv(std::ostream& out, const TrajectoryLog& log, std::int64_t stride) {
    out << kEdgesHeader << '\n';
    const auto& channels = log.edges();
    for (auto k : log.steps()) {
        if (!keep(k, stride) || !log.has_edges(k)) continue;
        const auto rows = log.edges_at(k);
        for (std::size_t c = 0; c < channels.size(); ++c) {
            out << k << ',' << channels[c].observer + 1 << ',' << channels[c].observed + 1 << ','
                << format_double(rows[c].z) << ',' << format_double(rows[c].eps) << '\n';
        }
    }
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows, std::int64_t stride) {
    out << "k,spread_y,residual,sigma_bar,v\n";
    for (const auto& r : rows) {
        if (!keep(r.k, stride)) continue;
        out << r.k << ',' << format_double(r.spread_y) << ',' << format_double(r.residual) << ',' << r.sigma_bar << ','
            << format_double(r.v) << '\n';
    }
}

json summary_to_json(const RunSummary& s) {
    return json{{"label", s.label},
                {"seed", s.seed},
                {"horizon", s.horizon},
                {"steps_completed", s.steps_completed},
                {"log_stride", s.log_stride},
                {"scenario_hash", s.scenario_hash},
                {"final_spread", s.final_spread},
                {"final_residual", s.final_residual},
                {"total_truncations", s.truncations},
                {"sigma_bar_final", s.sigma_bar_final},
                {"wall_time", s.wall_time},
                {"final_u", s.final_u},
                {"final_sigma", s.final_sigma},
                {"aborted", s.aborted},
                {"diagnostic", s.diagnostic}};
}

void write_run(const fs::path& dir, const Scenario& s, const RunResult& r) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

    const std::int64_t stride = std::max<std::int64_t>(1, s.log_stride);
    {
        auto out = open_out(dir / "trajectory.csv");
        write_trajectory_csv(out, r.log, stride);
    }
    {
        auto out = open_out(dir / "edges.csv");
        write_edges_csv(out, r.log, stride);
    }
    {
        auto out = open_out(dir / "metrics.csv");
        write_metrics_csv(out, consensus_metrics(r.log, system_model(s)), stride);
    }
    {
        auto out = open_out(dir / "summary.json");
        out << summary_to_json(r.summary).dump(2) << '\n';
    }
    {
        Scenario recorded = s;
        recorded.noise.master_seed = r.summary.seed;
        auto out = open_out(dir / "scenario.json");
        out << scenario_to_json(recorded).dump(2) << '\n';
    }
    for (const char* name : {"trajectory.csv", "edges.csv", "metrics.csv", "summary.json", "scenario.json"}) {
        if (!fs::exists(dir / name)) throw Error(ErrorCode::IoError, "failed to write " + (dir / name).string());
    }
}

LoadedRun read_log_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, "no log directory at " + dir.string());
    for (const char* name : {"trajectory.csv", "edges.csv", "summary.json", "scenario.json"}) {
        if (!fs::exists(dir / name)) throw Error(ErrorCode::IoError, "missing " + (dir / name).string());
    }

    LoadedRun out;
    out.scenario = scenario_from_json(read_json(dir / "scenario.json"));
    out.summary = read_json(dir / "summary.json");
    out.stride = out.summary.value("log_stride", std::int64_t{1});

    const std::size_t n = out.scenario.agents;
    const auto channels = directed_edges(scenario_topology(out.scenario));
    out.log = TrajectoryLog(n, channels);

    std::map<std::int64_t, std::vector<EdgeRecord>> edge_rows;
    {
        CsvReader csv(dir / "edges.csv", kEdgesHeader);
        std::vector<std::string_view> f;
        std::int64_t current = 0;
        std::vector<EdgeRecord>* bucket = nullptr;
        while (csv.next(f, 5)) {
            const auto k = parse_int(f[0]);
            if (k != current || bucket == nullptr) {
                current = k;
                bucket = &edge_rows[k];
            }
            const auto c = bucket->size();
            if (c >= channels.size() || parse_int(f[1]) != static_cast<std::int64_t>(channels[c].observer + 1) ||
                parse_int(f[2]) != static_cast<std::int64_t>(channels[c].observed + 1)) {
                throw Error(ErrorCode::ParseError, "edges.csv: channel order does not match the topology at k=" +
                                                       std::to_string(k));
            }
            bucket->push_back({parse_double(f[3]), parse_double(f[4])});
        }
    }

    {
        CsvReader csv(dir / "trajectory.csv", kTrajectoryHeader);
        std::vector<std::string_view> f;
        std::vector<AgentRecord> rows;
        std::int64_t current = 0;
        auto flush = [&] {
            if (rows.empty()) return;
            if (rows.size() != n) {
                throw Error(ErrorCode::ParseError, "trajectory.csv: step " + std::to_string(current) + " has " +
                                                       std::to_string(rows.size()) + " agents");
            }
            const auto it = edge_rows.find(current);
            if (it != edge_rows.end() && it->second.size() != channels.size()) {
                throw Error(ErrorCode::ParseError, "edges.csv: step " + std::to_string(current) + " is incomplete");
            }
            out.log.append(current, rows,
                           it == edge_rows.end() ? std::span<const EdgeRecord>{} : std::span<const EdgeRecord>(it->second));
            rows.clear();
        };
        while (csv.next(f, 8)) {
            const auto k = parse_int(f[0]);
            if (k != current) {
                flush();
                current = k;
            }
            if (parse_int(f[1]) != static_cast<std::int64_t>(rows.size() + 1)) {
                throw Error(ErrorCode::ParseError, "trajectory.csv: agents out of order at k=" + std::to_string(k));
            }
            rows.push_back({parse_double(f[2]), parse_int(f[3]), parse_int(f[4]), parse_double(f[5]),
                            parse_double(f[6]), parse_double(f[7])});
        }
        flush();
    }

    const auto& s = out.summary;
    if (s.contains("final_u") && s.contains("final_sigma") && s.at("final_u").size() == n) {
        out.log.set_final_state(s.at("final_u").get<std::vector<double>>(),
                                s.at("final_sigma").get<std::vector<std::int64_t>>());
    }
    return out;
}

std::vector<std::int64_t> geometric_steps(std::int64_t K, int per_decade) {
    std::vector<std::int64_t> out;
    if (K < 1) return out;
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    double x = 1.0;
    std::int64_t last = 0;
    while (true) {
        const auto k = std::max(last + 1, static_cast<std::int64_t>(std::llround(x)));
        if (k >= K) break;
        out.push_back(k);
        last = k;
        x *= ratio;
    }
    out.push_back(K);
    return out;
}

std::vector<fs::path> write_plotdata(const TrajectoryLog& log, const fs::path& dir, int per_decade) {
    if (log.empty()) throw Error(ErrorCode::IoError, "log holds no steps");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

    const std::size_t n = log.agents();
    const fs::path inputs = dir / "inputs.csv";
    const fs::path outputs = dir / "outputs.csv";
    auto in_csv = open_out(inputs);
    auto out_csv = open_out(outputs);
    in_csv << 'k';
    out_csv << 'k';
    for (std::size_t i = 1; i <= n; ++i) {
        in_csv << ",u_" << i;
        out_csv << ",y_" << i;
    }
    in_csv << '\n';
    out_csv << '\n';

    // u_{i,k} comes from row k; y_{i,k+1} from row k as well.
    for (auto k : geometric_steps(log.last_step(), per_decade)) {
        if (!log.has_step(k)) continue;
        const auto row = log.at(k);
        in_csv << k;
        out_csv << k + 1;
        for (const auto& r : row) {
            in_csv << ',' << format_double(r.u);
            out_csv << ',' << format_double(r.y_next);
        }
        in_csv << '\n';
        out_csv << '\n';
    }
    if (!in_csv || !out_csv) throw Error(ErrorCode::IoError, "failed writing plot data in " + dir.string());
    return {inputs, outputs};
}

}  // namespace netcons
