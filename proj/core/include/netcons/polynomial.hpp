#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace netcons {

/// Operator polynomial in the backward shift z, 1 + a_1 z + ... + a_n z^n.
/// The constant term is fixed at 1.
class Polynomial {
public:
    Polynomial() : coeffs_{1.0} {}
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs) : Polynomial(std::vector<double>(coeffs)) {}

    [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    /// Coefficient of z^s; zero past the stored degree.
    [[nodiscard]] double coeff(std::size_t s) const noexcept { return s < coeffs_.size() ? coeffs_[s] : 0.0; }

    [[nodiscard]] std::complex<double> evaluate(std::complex<double> z) const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<double> coeffs_;
};

/// C(1): the sum of coefficients.
double eval_at_one(const Polynomial& p);

struct StabilityReport {
    bool stable = true;
    std::vector<std::complex<double>> roots;
    double min_root_modulus = 0.0;  // +inf when there are no roots
};

/// Roots of p via companion-matrix eigenvalues. Stable iff every root
/// satisfies |z| > 1 + margin; a polynomial without roots is stable.
/// Throws RootSolverFailure when the eigenvalue iteration does not converge.
StabilityReport check_stability(const Polynomial& p, double margin = 1e-9);

/// Expands prod_k (1 - z / root_k) for real roots and conjugate pairs given
/// by their upper-half-plane member. Used to build stable test systems.
Polynomial polynomial_from_roots(const std::vector<std::complex<double>>& roots);

}  // namespace netcons
