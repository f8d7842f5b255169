#include "netcons/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <optional>

#include "netcons/errors.hpp"

namespace netcons {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " has " + std::to_string(got) + " entries, expected " + std::to_string(want));
    }
}

// g_i from precomputed h values, neighbor-sum form.
double g_component(const Topology& t, const std::vector<double>& h, std::size_t i) {
    double sum = 0.0;
    for (const auto& nb : t.neighbors(i)) sum += nb.weight * (h[nb.index] - h[i]);
    return sum;
}

std::vector<double> gain_values(std::span<const StaticGain> gains, std::span<const double> u) {
    std::vector<double> h(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) h[i] = gains[i](u[i]);
    return h;
}

void require_contiguous(const TrajectoryLog& log) {
    const auto& steps = log.steps();
    if (steps.empty() || steps.front() != 1 || steps.back() != static_cast<std::int64_t>(steps.size())) {
        throw Error(ErrorCode::IncompleteLog, "analysis requires every step 1..K to be logged");
    }
}

}  // namespace

Eigen::VectorXd evaluate_gains(std::span<const StaticGain> gains, std::span<const double> u) {
    require_size(u.size(), gains.size(), "input vector");
    Eigen::VectorXd h(static_cast<Eigen::Index>(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i) h(static_cast<Eigen::Index>(i)) = gains[i](u[i]);
    return h;
}

std::vector<double> regression_g(std::span<const double> u, std::span<const StaticGain> gains, const Topology& t) {
    require_size(u.size(), t.size(), "input vector");
    require_size(gains.size(), t.size(), "gain list");
    const auto h = gain_values(gains, u);
    std::vector<double> g(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) g[i] = g_component(t, h, i);
    return g;
}

Eigen::VectorXd regression_g_laplacian(std::span<const double> u, std::span<const StaticGain> gains,
                                       const Eigen::MatrixXd& L) {
    require_size(u.size(), static_cast<std::size_t>(L.rows()), "input vector");
    return -(L * evaluate_gains(gains, u));
}

NoiseComponents noise_decomposition(const TrajectoryLog& log, std::int64_t k, std::size_t i,
                                    const SystemModel& model) {
    const auto rows = log.at(k);
    const auto edges = log.edges_at(k);
    const auto& t = model.topology;
    require_size(rows.size(), t.size(), "log row");

    NoiseComponents out;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& de = log.edges()[e];
        if (de.observer == i) out.channel += de.weight * edges[e].eps;
    }
    const auto& gains = model.gains;
    out.own_transient = t.degree(i) * (gains[i](rows[i].u) - rows[i].y_next);
    for (const auto& nb : t.neighbors(i)) {
        const auto& rj = rows[nb.index];
        out.neighbor_transient += nb.weight * (rj.y_next - gains[nb.index](rj.u));
    }
    return out;
}

double max_decomposition_error(const TrajectoryLog& log, const SystemModel& model) {
    double worst = 0.0;
    std::vector<double> u(log.agents());
    for (auto k : log.steps()) {
        if (!log.has_edges(k)) continue;
        const auto rows = log.at(k);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = rows[i].u;
        const auto g = regression_g(u, model.gains, model.topology);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const auto parts = noise_decomposition(log, k, i, model);
            worst = std::max(worst, std::abs(rows[i].O_next - g[i] - parts.total()));
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------

TruncationTimes::TruncationTimes(std::vector<std::vector<std::int64_t>> per_agent)
    : per_agent_(std::move(per_agent)) {
    for (const auto& levels : per_agent_) {
        if (levels.size() > first_.size()) first_.resize(levels.size(), kNever);
        for (std::size_t m = 0; m < levels.size(); ++m) first_[m] = std::min(first_[m], levels[m]);
    }
}

std::int64_t TruncationTimes::r(std::int64_t m) const noexcept {
    if (m < 0) return 1;
    return static_cast<std::size_t>(m) < first_.size() ? first_[static_cast<std::size_t>(m)] : kNever;
}

std::int64_t TruncationTimes::r(std::size_t i, std::int64_t m) const noexcept {
    if (m < 0) return 1;
    const auto& levels = per_agent_[i];
    return static_cast<std::size_t>(m) < levels.size() ? levels[static_cast<std::size_t>(m)] : kNever;
}

std::int64_t TruncationTimes::r_bar(std::size_t i, std::int64_t m) const noexcept {
    return std::min(r(i, m), r(m + 1));
}

TruncationTimes truncation_times(const TrajectoryLog& log) {
    std::vector<std::vector<std::int64_t>> levels(log.agents());
    auto observe = [&levels](std::size_t i, std::int64_t time, std::int64_t sigma) {
        auto& lv = levels[i];
        while (static_cast<std::int64_t>(lv.size()) <= sigma) lv.push_back(time);
    };
    for (std::size_t pos = 0; pos < log.size(); ++pos) {
        const auto rows = log.row(pos);
        const auto k = log.steps()[pos];
        for (std::size_t i = 0; i < rows.size(); ++i) observe(i, k, rows[i].sigma);
    }
    if (log.has_final_state() && !log.empty()) {
        for (std::size_t i = 0; i < log.agents(); ++i) observe(i, log.last_step() + 1, log.final_sigma()[i]);
    }
    return TruncationTimes(std::move(levels));
}

DiameterBoundCheck check_diameter_bound(const TruncationTimes& times, std::size_t diameter, std::int64_t last_time) {
    DiameterBoundCheck out;
    const auto d = static_cast<std::int64_t>(diameter);
    for (std::int64_t m = 1; m <= times.max_level(); ++m) {
        const auto first = times.r(m);
        ++out.levels_checked;
        for (std::size_t i = 0; i < times.agents(); ++i) {
            const auto ri = times.r(i, m);
            if (ri == kNever) {
                // Undecided unless the log runs past r(m) + d.
                if (last_time != kNever && first + d <= last_time) {
                    out.ok = false;
                    out.max_gap = std::max(out.max_gap, last_time - first + 1);
                }
                continue;
            }
            const auto gap = ri - first;
            out.max_gap = std::max(out.max_gap, gap);
            if (gap < 0 || gap > d) out.ok = false;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

HorizonIndex m_of(std::int64_t k, double T) {
    if (k < 1 || !(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "m_of needs k >= 1 and T > 0");
    double sum = 0.0;
    std::int64_t m = k - 1;
    for (;;) {
        const double next = sum + 1.0 / static_cast<double>(m + 1);
        if (next > T) break;
        sum = next;
        ++m;
    }
    return {m, m == k - 1};
}

bool m_of_within_bounds(std::int64_t k, double T, std::int64_t m) noexcept {
    const double e = std::exp(T);
    const double md = static_cast<double>(m);
    return static_cast<double>(k - 1) * e - 1.0 < md && md < static_cast<double>(k) * e - 1.0;
}

// ---------------------------------------------------------------------------

AuxiliarySequences build_auxiliary(const TrajectoryLog& log, const SystemModel& model) {
    require_contiguous(log);
    const std::size_t n = log.agents();
    require_size(model.gains.size(), n, "gain list");
    require_size(model.u_star.size(), n, "reset vector");
    const auto times = truncation_times(log);
    const std::int64_t K = log.last_step();
    const std::int64_t T = K + (log.has_final_state() ? 1 : 0);

    AuxiliarySequences aux;
    aux.agents = n;
    aux.last_step = K;
    aux.u_bar.resize(static_cast<std::size_t>(T) * n);
    aux.sigma_bar.resize(static_cast<std::size_t>(T));
    aux.in_catch_up.resize(static_cast<std::size_t>(T) * n);
    aux.eps_bar.resize(static_cast<std::size_t>(K) * n);

    std::vector<double> u(n);
    std::vector<std::int64_t> sigma(n);
    for (std::int64_t k = 1; k <= T; ++k) {
        if (k <= K) {
            const auto rows = log.at(k);
            for (std::size_t i = 0; i < n; ++i) {
                u[i] = rows[i].u;
                sigma[i] = rows[i].sigma;
            }
        } else {
            u = log.final_u();
            sigma = log.final_sigma();
        }
        const auto m = *std::max_element(sigma.begin(), sigma.end());
        const auto base = static_cast<std::size_t>(k - 1) * n;
        aux.sigma_bar[static_cast<std::size_t>(k - 1)] = m;
        for (std::size_t i = 0; i < n; ++i) {
            const bool catching = k < times.r_bar(i, m);
            aux.in_catch_up[base + i] = catching ? 1 : 0;
            aux.u_bar[base + i] = catching ? model.u_star[i] : u[i];
        }
    }

    const auto& t = model.topology;
    std::vector<double> hu(n), hb(n);
    for (std::int64_t k = 1; k <= K; ++k) {
        const auto rows = log.at(k);
        const auto base = static_cast<std::size_t>(k - 1) * n;
        for (std::size_t i = 0; i < n; ++i) {
            hu[i] = model.gains[i](rows[i].u);
            hb[i] = model.gains[i](aux.u_bar[base + i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double value = 0.0;
            if (aux.in_catch_up[base + i]) {
                const double h_reset = model.gains[i](model.u_star[i]);
                for (const auto& nb : t.neighbors(i)) value += nb.weight * (hb[nb.index] - h_reset);
                value = -value;
            } else {
                const double eps = rows[i].O_next - g_component(t, hu, i);
                double shift = 0.0;
                for (const auto& nb : t.neighbors(i)) shift += nb.weight * (hu[nb.index] - hb[nb.index]);
                value = eps + shift;
            }
            aux.eps_bar[base + i] = value;
        }
    }
    return aux;
}

RecursionCheck verify_centralized_recursion(const AuxiliarySequences& aux, const SystemModel& model,
                                            double tolerance) {
    const std::size_t n = aux.agents;
    RecursionCheck out;
    out.transitions = std::min(aux.last_step, aux.u_bar_steps() - 1);
    out.residuals.assign(static_cast<std::size_t>(std::max<std::int64_t>(out.transitions, 0)) * n, 0.0);

    std::vector<double> hb(n), candidate(n);
    for (std::int64_t k = 1; k <= out.transitions; ++k) {
        for (std::size_t i = 0; i < n; ++i) hb[i] = model.gains[i](aux.u_bar_at(k, i));
        const double step = Schedule::step_size(k);
        double sup = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double o_bar = g_component(model.topology, hb, i) + aux.eps_bar_at(k, i);
            candidate[i] = aux.u_bar_at(k, i) + step * o_bar;
            sup = std::max(sup, std::abs(candidate[i]));
        }
        const auto sigma = aux.sigma_bar_at(k);
        const bool keep = sup < model.schedule.bound(sigma);
        const auto sigma_next = keep ? sigma : sigma + 1;
        if (sigma_next != aux.sigma_bar_at(k + 1)) ++out.sigma_mismatches;
        for (std::size_t i = 0; i < n; ++i) {
            const double replayed = keep ? candidate[i] : model.u_star[i];
            const double residual = std::abs(replayed - aux.u_bar_at(k + 1, i));
            out.residuals[static_cast<std::size_t>(k - 1) * n + i] = residual;
            if (residual > out.max_abs_residual || std::isnan(residual)) {
                out.max_abs_residual = residual;
                out.worst_step = k;
                out.worst_agent = i;
            }
        }
    }
    out.pass = out.transitions > 0 && out.max_abs_residual < tolerance && out.sigma_mismatches == 0;
    return out;
}

double max_observation_structure_error(const AuxiliarySequences& aux, const TrajectoryLog& log,
                                       const SystemModel& model) {
    const std::size_t n = aux.agents;
    std::vector<double> hb(n);
    double worst = 0.0;
    for (std::int64_t k = 1; k <= aux.last_step; ++k) {
        const auto rows = log.at(k);
        for (std::size_t i = 0; i < n; ++i) hb[i] = model.gains[i](aux.u_bar_at(k, i));
        for (std::size_t i = 0; i < n; ++i) {
            const double o_bar = g_component(model.topology, hb, i) + aux.eps_bar_at(k, i);
            const double expected = aux.catching_up(k, i) ? 0.0 : rows[i].O_next;
            worst = std::max(worst, std::abs(o_bar - expected));
        }
    }
    return worst;
}

namespace {

template <typename Pred>
std::vector<std::pair<std::int64_t, std::size_t>> catch_up_steps(const TrajectoryLog& log, Pred keep) {
    std::vector<std::pair<std::int64_t, std::size_t>> out;
    for (std::size_t pos = 0; pos < log.size(); ++pos) {
        const auto k = log.steps()[pos];
        const auto rows = log.row(pos);
        const bool has_next = pos + 1 < log.size() && log.steps()[pos + 1] == k + 1;
        if (!has_next && !log.has_final_state()) continue;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto next_sigma = has_next ? log.row(pos + 1)[i].sigma : log.final_sigma()[i];
            if (rows[i].sigma_prime > rows[i].sigma && keep(rows[i].sigma_prime, next_sigma)) out.emplace_back(k, i);
        }
    }
    return out;
}

}  // namespace

std::vector<std::pair<std::int64_t, std::size_t>> catch_up_landings(const TrajectoryLog& log) {
    return catch_up_steps(log, [](std::int64_t pooled, std::int64_t next) { return next == pooled; });
}

std::vector<std::pair<std::int64_t, std::size_t>> catch_up_truncations(const TrajectoryLog& log) {
    return catch_up_steps(log, [](std::int64_t pooled, std::int64_t next) { return next > pooled; });
}

// ---------------------------------------------------------------------------

double invert_gain(const StaticGain& h, double b) {
    double lo = -1.0;
    double hi = 1.0;
    int doublings = 0;
    while (h(lo) > b) {
        lo *= 2.0;
        if (++doublings > kBracketMaxDoublings) throw Error(ErrorCode::BracketFailure, "no lower bracket for h^-1");
    }
    doublings = 0;
    while (h(hi) < b) {
        hi *= 2.0;
        if (++doublings > kBracketMaxDoublings) throw Error(ErrorCode::BracketFailure, "no upper bracket for h^-1");
    }
    for (int it = 0; it < kBisectionMaxIterations && hi - lo > kBisectionTolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (h(mid) < b) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double gain_root(const StaticGain& h) { return invert_gain(h, 0.0); }

ConsensusPoint consensus_point(std::span<const StaticGain> gains, double c, double tol) {
    if (gains.empty()) throw Error(ErrorCode::InvalidArgument, "consensus_point needs at least one gain");
    auto total = [&](double b) {
        double sum = 0.0;
        for (const auto& h : gains) sum += invert_gain(h, b);
        return sum;
    };
    double lo = -1.0;
    double hi = 1.0;
    int doublings = 0;
    while (total(lo) > c) {
        lo *= 2.0;
        if (++doublings > kBracketMaxDoublings) throw Error(ErrorCode::BracketFailure, "no lower bracket for b");
    }
    doublings = 0;
    while (total(hi) < c) {
        hi *= 2.0;
        if (++doublings > kBracketMaxDoublings) throw Error(ErrorCode::BracketFailure, "no upper bracket for b");
    }
    double b = 0.5 * (lo + hi);
    for (int it = 0; it < kBisectionMaxIterations; ++it) {
        b = 0.5 * (lo + hi);
        const double residual = total(b) - c;
        if (std::abs(residual) < 0.01 * tol || b <= lo || b >= hi) break;
        if (residual < 0.0) {
            lo = b;
        } else {
            hi = b;
        }
    }
    ConsensusPoint point;
    point.b = b;
    for (const auto& h : gains) point.u.push_back(invert_gain(h, b));
    return point;
}

LyapunovFunction::LyapunovFunction(std::vector<StaticGain> gains, double tol) : gains_(std::move(gains)), tol_(tol) {
    roots_.reserve(gains_.size());
    for (const auto& h : gains_) roots_.push_back(gain_root(h));
}

double LyapunovFunction::operator()(std::span<const double> u) const {
    require_size(u.size(), gains_.size(), "input vector");
    double v = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto& h = gains_[i];
        v += adaptive_simpson([&h](double x) { return h(x); }, roots_[i], u[i], tol_);
    }
    return v;
}

double lyapunov_v(std::span<const double> u, std::span<const StaticGain> gains, double tol) {
    return LyapunovFunction(std::vector<StaticGain>(gains.begin(), gains.end()), tol)(u);
}

// ---------------------------------------------------------------------------

std::vector<MetricsRow> consensus_metrics(const TrajectoryLog& log, const SystemModel& model, bool with_lyapunov) {
    std::vector<MetricsRow> out;
    out.reserve(log.size());
    const std::size_t n = log.agents();
    std::optional<LyapunovFunction> v;
    if (with_lyapunov) v.emplace(model.gains);
    std::vector<double> u(n);
    for (std::size_t pos = 0; pos < log.size(); ++pos) {
        const auto rows = log.row(pos);
        MetricsRow row;
        row.k = log.steps()[pos];
        double ymin = rows[0].y_next, ymax = rows[0].y_next;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = rows[i].u;
            ymin = std::min(ymin, rows[i].y_next);
            ymax = std::max(ymax, rows[i].y_next);
            row.sigma_bar = std::max(row.sigma_bar, rows[i].sigma);
        }
        row.spread_y = ymax - ymin;
        for (double g : regression_g(u, model.gains, model.topology)) row.residual = std::max(row.residual, std::abs(g));
        if (v) row.v = (*v)(u);
        out.push_back(row);
    }
    return out;
}

std::vector<PartialSumPoint> partial_sum_trace(const TrajectoryLog& log, std::size_t i, std::int64_t stride) {
    require_contiguous(log);
    std::vector<PartialSumPoint> out;
    const auto K = log.last_step();
    for (std::int64_t k = 1; k <= K; k += std::max<std::int64_t>(stride, 1)) {
        const auto end = k + static_cast<std::int64_t>(std::floor(std::log(static_cast<double>(k))));
        if (end > K) break;
        double sum = 0.0;
        for (std::int64_t s = k; s <= end; ++s) sum += log.at(s, i).O_next / static_cast<double>(s);
        out.push_back({k, std::abs(sum)});
    }
    return out;
}

}  // namespace netcons
