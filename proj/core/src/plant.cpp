#include "netcons/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netcons/errors.hpp"

namespace netcons {

std::string_view to_string(PlantKind kind) noexcept {
    return kind == PlantKind::Hammerstein ? "hammerstein" : "wiener";
}

LinearFilter::LinearFilter(Polynomial C, Polynomial D)
    : C_(std::move(C)), D_(std::move(D)), out_hist_(C_.degree(), 0.0), in_hist_(D_.degree(), 0.0) {}

double LinearFilter::step(double input) {
    // w_{k+1} = -sum_s c_s w_{k+1-s} + x_k + sum_r d_r x_{k-r}
    double next = input;
    for (std::size_t s = 1; s <= out_hist_.size(); ++s) next -= C_.coeff(s) * out_hist_[s - 1];
    for (std::size_t r = 1; r <= in_hist_.size(); ++r) next += D_.coeff(r) * in_hist_[r - 1];

    if (!out_hist_.empty()) {
        std::copy_backward(out_hist_.begin(), out_hist_.end() - 1, out_hist_.end());
        out_hist_.front() = next;
    }
    if (!in_hist_.empty()) {
        std::copy_backward(in_hist_.begin(), in_hist_.end() - 1, in_hist_.end());
        in_hist_.front() = input;
    }
    return next;
}

void LinearFilter::reset() {
    std::fill(out_hist_.begin(), out_hist_.end(), 0.0);
    std::fill(in_hist_.begin(), in_hist_.end(), 0.0);
}

AgentPlant::AgentPlant(PlantKind kind, Polynomial C, Polynomial D, Nonlinearity f)
    : kind_(kind), filter_(std::move(C), std::move(D)), f_(f) {}

double AgentPlant::step(double u) {
    if (kind_ == PlantKind::Hammerstein) {
        v_ = f_(u);
        y_ = filter_.step(v_);
    } else {
        v_ = filter_.step(u);
        y_ = f_(v_);
    }
    if (!std::isfinite(y_)) {
        throw Error(ErrorCode::NonFiniteValue, "plant output overflowed for input " + std::to_string(u));
    }
    return y_;
}

void AgentPlant::reset() {
    filter_.reset();
    y_ = 0.0;
    v_ = 0.0;
}

StateSpaceRealization build_state_space(const Polynomial& C, const Polynomial& D) {
    const auto order = std::max(C.degree(), D.degree());
    const auto n = static_cast<Eigen::Index>(order + 1);
    StateSpaceRealization ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::VectorXd::Zero(n);
    ss.G1 = Eigen::RowVectorXd::Zero(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        ss.A(r, 0) = -C.coeff(static_cast<std::size_t>(r) + 1);
        if (r + 1 < n) ss.A(r, r + 1) = 1.0;
        ss.B(r) = D.coeff(static_cast<std::size_t>(r));
    }
    ss.G1(0) = 1.0;
    return ss;
}

StateSpacePlant::StateSpacePlant(PlantKind kind, const Polynomial& C, const Polynomial& D, Nonlinearity f)
    : kind_(kind), ss_(build_state_space(C, D)), f_(f), X_(Eigen::VectorXd::Zero(ss_.dimension())) {}

double StateSpacePlant::step(double u) {
    const double drive = kind_ == PlantKind::Hammerstein ? f_(u) : u;
    X_ = ss_.A * X_ + ss_.B * drive;
    const double w = ss_.G1 * X_;
    return kind_ == PlantKind::Hammerstein ? w : f_(w);
}

StaticGain static_gain(PlantKind kind, const Polynomial& C, const Polynomial& D, const Nonlinearity& f) {
    const double c = eval_at_one(C);
    if (std::abs(c) < 1e-12) {
        throw Error(ErrorCode::ZeroDCGain, "C(1) vanishes; the static gain is undefined");
    }
    return StaticGain{kind, c, eval_at_one(D), f};
}

StaticGain static_gain(const AgentPlant& plant) {
    return static_gain(plant.kind(), plant.C(), plant.D(), plant.nonlinearity());
}

bool steady_state_check(AgentPlant plant, double u, std::size_t horizon, double tol) {
    const StaticGain h = static_gain(plant);
    double y = plant.output();
    for (std::size_t k = 0; k < horizon; ++k) y = plant.step(u);
    return std::abs(y - h(u)) < tol;
}

bool is_strictly_increasing(const StaticGain& h, double lo, double hi, std::size_t points) {
    if (points < 2) return true;
    const double step = (hi - lo) / static_cast<double>(points - 1);
    double prev = h(lo);
    for (std::size_t k = 1; k < points; ++k) {
        const double cur = h(lo + step * static_cast<double>(k));
        if (!(cur > prev)) return false;
        prev = cur;
    }
    return true;
}

DecayFit fit_power_decay(const Eigen::MatrixXd& A, std::size_t kmax) {
    DecayFit fit;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(A.rows(), A.cols());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 1; k <= kmax; ++k) {
        power = power * A;
        const double norm = power.operatorNorm();
        if (!(norm > 0.0) || !std::isfinite(norm)) continue;
        const double x = static_cast<double>(k);
        const double y = std::log(norm);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++fit.samples;
    }
    if (fit.samples >= 2) {
        const double m = static_cast<double>(fit.samples);
        fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        fit.intercept = (sy - fit.slope * sx) / m;
    }
    return fit;
}

}  // namespace netcons
