#include "netcons/polynomial.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "netcons/errors.hpp"

namespace netcons {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "polynomial needs at least the constant term");
    }
    if (coeffs_.front() != 1.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "polynomial constant term must be 1, got " + std::to_string(coeffs_.front()));
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "polynomial coefficient is not finite");
    }
}

std::complex<double> Polynomial::evaluate(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double eval_at_one(const Polynomial& p) {
    double sum = 0.0;
    for (double c : p.coeffs()) sum += c;
    return sum;
}

StabilityReport check_stability(const Polynomial& p, double margin) {
    StabilityReport report;
    report.min_root_modulus = std::numeric_limits<double>::infinity();

    std::size_t degree = p.degree();
    while (degree > 0 && p.coeff(degree) == 0.0) --degree;
    if (degree == 0) return report;

    // Companion matrix of the monic polynomial z^n + (a_{n-1}/a_n) z^{n-1} + ... + a_0/a_n.
    const auto n = static_cast<Eigen::Index>(degree);
    const double lead = p.coeff(degree);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 1; r < n; ++r) companion(r, r - 1) = 1.0;
    for (Eigen::Index r = 0; r < n; ++r) {
        companion(r, n - 1) = -p.coeff(static_cast<std::size_t>(r)) / lead;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::RootSolverFailure, "companion eigenvalue iteration did not converge");
    }
    const auto& eig = solver.eigenvalues();
    for (Eigen::Index k = 0; k < eig.size(); ++k) {
        const std::complex<double> root = eig(k);
        report.roots.push_back(root);
        report.min_root_modulus = std::min(report.min_root_modulus, std::abs(root));
    }
    report.stable = report.min_root_modulus > 1.0 + margin;
    return report;
}

Polynomial polynomial_from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<double> coeffs{1.0};
    auto multiply = [&coeffs](const std::vector<double>& factor) {
        std::vector<double> out(coeffs.size() + factor.size() - 1, 0.0);
        for (std::size_t a = 0; a < coeffs.size(); ++a) {
            for (std::size_t b = 0; b < factor.size(); ++b) out[a + b] += coeffs[a] * factor[b];
        }
        coeffs = std::move(out);
    };
    for (const auto& r : roots) {
        if (r == std::complex<double>(0.0, 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "a root at z = 0 cannot have unit constant term");
        }
        const std::complex<double> inv = 1.0 / r;
        if (r.imag() == 0.0) {
            multiply({1.0, -inv.real()});
        } else {
            multiply({1.0, -2.0 * inv.real(), std::norm(inv)});
        }
    }
    return Polynomial(std::move(coeffs));
}

}  // namespace netcons
