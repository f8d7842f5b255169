#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "netcons/nonlinearity.hpp"
#include "netcons/polynomial.hpp"

namespace netcons {

enum class PlantKind { Hammerstein, Wiener };

std::string_view to_string(PlantKind kind) noexcept;

/// C(z) w_{k+1} = D(z) x_k with zero pre-time history. Histories hold the
/// most recent values first.
class LinearFilter {
public:
    LinearFilter() = default;
    LinearFilter(Polynomial C, Polynomial D);

    /// Feeds x_k and returns w_{k+1}.
    double step(double input);
    void reset();

    [[nodiscard]] const Polynomial& C() const noexcept { return C_; }
    [[nodiscard]] const Polynomial& D() const noexcept { return D_; }

private:
    Polynomial C_;
    Polynomial D_;
    std::vector<double> out_hist_;  // w_k, w_{k-1}, ..., length p
    std::vector<double> in_hist_;   // x_{k-1}, ..., x_{k-q}, length q
};

/// One agent's open-loop Hammerstein or Wiener dynamics, simulated by the
/// difference equations.
///   Hammerstein: v_k = f(u_k),            C(z) y_{k+1} = D(z) v_k
///   Wiener:      C(z) v_{k+1} = D(z) u_k, y_{k+1} = f(v_{k+1})
class AgentPlant {
public:
    AgentPlant(PlantKind kind, Polynomial C, Polynomial D, Nonlinearity f);

    /// Applies u_k and returns y_{k+1}. Throws NonFiniteValue on overflow.
    double step(double u);
    void reset();

    [[nodiscard]] PlantKind kind() const noexcept { return kind_; }
    [[nodiscard]] const Polynomial& C() const noexcept { return filter_.C(); }
    [[nodiscard]] const Polynomial& D() const noexcept { return filter_.D(); }
    [[nodiscard]] const Nonlinearity& nonlinearity() const noexcept { return f_; }
    [[nodiscard]] double output() const noexcept { return y_; }
    [[nodiscard]] double internal() const noexcept { return v_; }

private:
    PlantKind kind_;
    LinearFilter filter_;
    Nonlinearity f_;
    double y_ = 0.0;
    double v_ = 0.0;
};

/// Observer-canonical realization X_{k+1} = A X_k + B x_k, w_k = G1 X_k of
/// dimension max(p, q) + 1.
struct StateSpaceRealization {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd G1;

    [[nodiscard]] Eigen::Index dimension() const noexcept { return A.rows(); }
};

StateSpaceRealization build_state_space(const Polynomial& C, const Polynomial& D);

/// Plant stepped through the state-space realization. Kept as an independent
/// cross-check of AgentPlant.
class StateSpacePlant {
public:
    StateSpacePlant(PlantKind kind, const Polynomial& C, const Polynomial& D, Nonlinearity f);

    double step(double u);
    [[nodiscard]] const Eigen::VectorXd& state() const noexcept { return X_; }
    [[nodiscard]] const StateSpaceRealization& realization() const noexcept { return ss_; }

private:
    PlantKind kind_;
    StateSpaceRealization ss_;
    Nonlinearity f_;
    Eigen::VectorXd X_;
};

/// Steady-state map: h(u) = (d/c) f(u) for Hammerstein, f((d/c) u) for
/// Wiener, with c = C(1), d = D(1).
struct StaticGain {
    PlantKind kind = PlantKind::Hammerstein;
    double c = 1.0;
    double d = 1.0;
    Nonlinearity f;

    [[nodiscard]] double operator()(double u) const noexcept {
        return kind == PlantKind::Hammerstein ? (d / c) * f(u) : f((d / c) * u);
    }
    [[nodiscard]] double derivative(double u) const noexcept {
        const double ratio = d / c;
        return kind == PlantKind::Hammerstein ? ratio * f.derivative(u) : ratio * f.derivative(ratio * u);
    }
};

/// Throws ZeroDCGain when |C(1)| < 1e-12.
StaticGain static_gain(PlantKind kind, const Polynomial& C, const Polynomial& D, const Nonlinearity& f);
StaticGain static_gain(const AgentPlant& plant);

/// Drives a copy of `plant` with constant u for `horizon` steps and reports
/// whether the final output is within tol of h(u).
bool steady_state_check(AgentPlant plant, double u, std::size_t horizon, double tol);

/// True iff h is strictly increasing on `points` evenly spaced samples of [lo, hi].
bool is_strictly_increasing(const StaticGain& h, double lo = -50.0, double hi = 50.0, std::size_t points = 10000);

struct DecayFit {
    double slope = 0.0;      // fitted -delta
    double intercept = 0.0;  // fitted ln r
    std::size_t samples = 0;
};

/// Least-squares fit of ln ||A^k||_2 against k for k = 1..kmax, skipping
/// exactly-zero powers.
DecayFit fit_power_decay(const Eigen::MatrixXd& A, std::size_t kmax = 200);

}  // namespace netcons
