#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netcons/controller.hpp"
#include "netcons/graph.hpp"
#include "netcons/plant.hpp"
#include "netcons/trajectory.hpp"

namespace netcons {

/// What the post-hoc analysis needs to know about the system that produced
/// a log: graph, static gains, reset points and schedule.
struct SystemModel {
    Topology topology;
    std::vector<StaticGain> gains;
    std::vector<double> u_star;
    Schedule schedule;
};

Eigen::VectorXd evaluate_gains(std::span<const StaticGain> gains, std::span<const double> u);

/// g_i(u) = sum_{j in N_i} p_ij (h_j(u_j) - h_i(u_i)). Throws DimensionMismatch.
std::vector<double> regression_g(std::span<const double> u, std::span<const StaticGain> gains, const Topology& t);

/// The same field computed as -L h(u).
Eigen::VectorXd regression_g_laplacian(std::span<const double> u, std::span<const StaticGain> gains,
                                       const Eigen::MatrixXd& L);

// ---------------------------------------------------------------------------
// Observation noise
// ---------------------------------------------------------------------------

/// O_{i,k+1} - g_i(u_k) split into the channel noise (e1), the agent's own
/// transient (e2) and its neighbors' transients (e3).
struct NoiseComponents {
    double channel = 0.0;          // sum_j p_ij eps_{ij,k+1}
    double own_transient = 0.0;    // p_i (h_i(u_{i,k}) - y_{i,k+1})
    double neighbor_transient = 0.0;  // sum_j p_ij (y_{j,k+1} - h_j(u_{j,k}))

    [[nodiscard]] double total() const noexcept { return channel + own_transient + neighbor_transient; }
};

/// Throws StepNotLogged when step k (or its edge data) is missing.
NoiseComponents noise_decomposition(const TrajectoryLog& log, std::int64_t k, std::size_t i, const SystemModel& model);

/// Largest |O - g - (e1 + e2 + e3)| over every logged step with edge data.
double max_decomposition_error(const TrajectoryLog& log, const SystemModel& model);

// ---------------------------------------------------------------------------
// Truncation times
// ---------------------------------------------------------------------------

inline constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

/// First-passage times of the truncation numbers. r(i, m) is the first time
/// sigma_{i,n} >= m, r(m) the minimum over agents; unattained levels map to
/// kNever. The final state, when logged, counts as time K+1.
class TruncationTimes {
public:
    TruncationTimes() = default;
    TruncationTimes(std::vector<std::vector<std::int64_t>> per_agent);

    [[nodiscard]] std::int64_t r(std::int64_t m) const noexcept;
    [[nodiscard]] std::int64_t r(std::size_t i, std::int64_t m) const noexcept;
    /// min(r(i, m), r(m + 1)).
    [[nodiscard]] std::int64_t r_bar(std::size_t i, std::int64_t m) const noexcept;

    /// Highest level reached by any agent.
    [[nodiscard]] std::int64_t max_level() const noexcept { return static_cast<std::int64_t>(first_.size()) - 1; }
    [[nodiscard]] std::size_t agents() const noexcept { return per_agent_.size(); }

private:
    std::vector<std::vector<std::int64_t>> per_agent_;
    std::vector<std::int64_t> first_;
};

TruncationTimes truncation_times(const TrajectoryLog& log);

struct DiameterBoundCheck {
    bool ok = true;
    std::int64_t max_gap = 0;  // max over attained m, all i of r(i, m) - r(m)
    std::int64_t levels_checked = 0;
};

/// Checks 0 <= r(i, m) - r(m) <= diameter for every attained m >= 1. Agents
/// that have not reached m by the end of the log are only checked when the
/// log extends far enough past r(m) to decide.
DiameterBoundCheck check_diameter_bound(const TruncationTimes& times, std::size_t diameter,
                                        std::int64_t last_time = kNever);

// ---------------------------------------------------------------------------
// Step-size horizon
// ---------------------------------------------------------------------------

struct HorizonIndex {
    std::int64_t m = 0;
    bool degenerate = false;  // a_k alone exceeds T, so m = k - 1
};

/// Largest m with sum_{s=k}^{m} 1/s <= T, by direct summation.
HorizonIndex m_of(std::int64_t k, double T);

/// (k-1) e^T - 1 < m < k e^T - 1.
bool m_of_within_bounds(std::int64_t k, double T, std::int64_t m) noexcept;

// ---------------------------------------------------------------------------
// Auxiliary sequences and the centralized recursion
// ---------------------------------------------------------------------------

/// Relabelled run: u_bar_{i,k} is u_i* while agent i is still catching up
/// with the current truncation level and u_{i,k} afterwards; eps_bar is
/// chosen so that the relabelled run obeys one centralized recursion.
struct AuxiliarySequences {
    std::size_t agents = 0;
    std::int64_t last_step = 0;             // K
    std::vector<double> u_bar;              // k = 1..K+1 (K+1 only with a final state)
    std::vector<double> eps_bar;            // eps_bar_{i,k+1}, k = 1..K
    std::vector<std::int64_t> sigma_bar;    // k = 1..K+1
    std::vector<unsigned char> in_catch_up; // k = 1..K: 1 when k < r_bar(i, sigma_bar_k)

    [[nodiscard]] std::int64_t u_bar_steps() const noexcept {
        return static_cast<std::int64_t>(sigma_bar.size());
    }
    [[nodiscard]] double u_bar_at(std::int64_t k, std::size_t i) const {
        return u_bar[static_cast<std::size_t>(k - 1) * agents + i];
    }
    [[nodiscard]] double eps_bar_at(std::int64_t k, std::size_t i) const {
        return eps_bar[static_cast<std::size_t>(k - 1) * agents + i];
    }
    [[nodiscard]] std::int64_t sigma_bar_at(std::int64_t k) const { return sigma_bar[static_cast<std::size_t>(k - 1)]; }
    [[nodiscard]] bool catching_up(std::int64_t k, std::size_t i) const {
        return in_catch_up[static_cast<std::size_t>(k - 1) * agents + i] != 0;
    }
};

/// Throws IncompleteLog unless the log holds every step 1..K.
AuxiliarySequences build_auxiliary(const TrajectoryLog& log, const SystemModel& model);

struct RecursionCheck {
    double max_abs_residual = 0.0;
    std::int64_t worst_step = 0;  // k of the transition k -> k+1
    std::size_t worst_agent = 0;
    std::int64_t sigma_mismatches = 0;
    std::int64_t transitions = 0;
    bool pass = false;
    std::vector<double> residuals;  // |replayed - recorded| per (k, i), k = 1..transitions
};

/// Replays u_bar_{k+1} from u_bar_k through the centralized recursion with
/// bound M_{sigma_bar_k}, sup-norm test and reset vector u*, and compares it
/// with the u_bar built from the log. pass iff the largest deviation is below
/// `tolerance` and the replayed sigma_bar never disagrees.
RecursionCheck verify_centralized_recursion(const AuxiliarySequences& aux, const SystemModel& model,
                                            double tolerance = 1e-9);

/// Largest |O_bar - expected| where O_bar = g(u_bar_k) + eps_bar_{k+1} must
/// vanish during catch-up and equal O_{i,k+1} otherwise.
double max_observation_structure_error(const AuxiliarySequences& aux, const TrajectoryLog& log,
                                       const SystemModel& model);

/// Steps k where agent i adopted a larger neighbor truncation number without
/// truncating itself. u_{i,k+1} is then u_i* + a_k O_{i,k+1} rather than u_i*.
std::vector<std::pair<std::int64_t, std::size_t>> catch_up_landings(const TrajectoryLog& log);

/// Steps k where agent i adopted a larger neighbor truncation number and its
/// own candidate u_i* + a_k O_{i,k+1} then left the bound, so sigma_{i,k+1}
/// skips past sigma'_{i,k}.
std::vector<std::pair<std::int64_t, std::size_t>> catch_up_truncations(const TrajectoryLog& log);

// ---------------------------------------------------------------------------
// Consensus point and Lyapunov function
// ---------------------------------------------------------------------------

inline constexpr double kBisectionTolerance = 1e-12;
inline constexpr int kBisectionMaxIterations = 500;
inline constexpr int kBracketMaxDoublings = 200;

/// Solves h(u) = b for a strictly increasing h with full range. The bracket
/// starts at [-1, 1] and doubles. Throws BracketFailure.
double invert_gain(const StaticGain& h, double b);

/// Root of h, i.e. invert_gain(h, 0).
double gain_root(const StaticGain& h);

struct ConsensusPoint {
    double b = 0.0;          // common output level
    std::vector<double> u;   // u_i = h_i^{-1}(b)
};

/// The unique u with h_1(u_1) = ... = h_N(u_N) and sum_i u_i = c.
ConsensusPoint consensus_point(std::span<const StaticGain> gains, double c, double tol = 1e-10);

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 50);

/// v(u) = sum_i int_{u_i^(0)}^{u_i} h_i(t) dt, with u_i^(0) the root of h_i.
class LyapunovFunction {
public:
    explicit LyapunovFunction(std::vector<StaticGain> gains, double tol = 1e-10);

    [[nodiscard]] double operator()(std::span<const double> u) const;
    [[nodiscard]] const std::vector<double>& roots() const noexcept { return roots_; }

private:
    std::vector<StaticGain> gains_;
    std::vector<double> roots_;
    double tol_;
};

double lyapunov_v(std::span<const double> u, std::span<const StaticGain> gains, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Row k: spread of y_{.,k+1}, ||L h(u_k)||_inf, sigma_bar_k and v(u_k).
struct MetricsRow {
    std::int64_t k = 0;
    double spread_y = 0.0;
    double residual = 0.0;
    std::int64_t sigma_bar = 0;
    double v = 0.0;
};

std::vector<MetricsRow> consensus_metrics(const TrajectoryLog& log, const SystemModel& model, bool with_lyapunov = true);

struct PartialSumPoint {
    std::int64_t k = 0;
    double value = 0.0;  // |sum_{s=k}^{k+[ln k]} a_s O_{i,s+1}|
};

/// Windowed step-weighted observation sums for agent i, sampled every `stride`
/// steps. Diagnostic only.
std::vector<PartialSumPoint> partial_sum_trace(const TrajectoryLog& log, std::size_t i, std::int64_t stride = 1);

// ---------------------------------------------------------------------------

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    struct Recurse {
        F& f;
        double operator()(double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
                          int depth) const {
            const double mid = 0.5 * (lo + hi);
            const double lmid = 0.5 * (lo + mid);
            const double rmid = 0.5 * (mid + hi);
            const double flm = f(lmid);
            const double frm = f(rmid);
            const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
            return (*this)(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth - 1) +
                   (*this)(mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth - 1);
        }
    };
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Recurse{f}(a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace netcons
