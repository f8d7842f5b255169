#pragma once

#include <string>
#include <string_view>

namespace netcons {

enum class NonlinearityKind {
    Identity,     // u
    Affine,       // beta*u + gamma
    CubicAffine,  // alpha*u^3 + beta*u + gamma
    ShiftedCube,  // (u - gamma)^3
};

/// Static nonlinearity from a closed catalog of parametric forms. Every form
/// is continuous with polynomial growth.
class Nonlinearity {
public:
    Nonlinearity() = default;

    static Nonlinearity identity() { return {}; }
    static Nonlinearity affine(double beta, double gamma) { return {NonlinearityKind::Affine, 0.0, beta, gamma}; }
    static Nonlinearity cubic_affine(double alpha, double beta, double gamma) {
        return {NonlinearityKind::CubicAffine, alpha, beta, gamma};
    }
    static Nonlinearity shifted_cube(double gamma) { return {NonlinearityKind::ShiftedCube, 0.0, 0.0, gamma}; }

    [[nodiscard]] double operator()(double u) const noexcept;
    /// Closed-form derivative, used by finite-difference checks.
    [[nodiscard]] double derivative(double u) const noexcept;

    [[nodiscard]] NonlinearityKind kind() const noexcept { return kind_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] std::string_view name() const noexcept;
    [[nodiscard]] std::string describe() const;

    friend bool operator==(const Nonlinearity&, const Nonlinearity&) = default;

private:
    Nonlinearity(NonlinearityKind kind, double alpha, double beta, double gamma)
        : kind_(kind), alpha_(alpha), beta_(beta), gamma_(gamma) {}

    NonlinearityKind kind_ = NonlinearityKind::Identity;
    double alpha_ = 0.0;
    double beta_ = 1.0;
    double gamma_ = 0.0;
};

/// Parses a catalog name ("identity", "affine", "cubic_affine",
/// "shifted_cube"). Throws ParseError for anything else.
NonlinearityKind nonlinearity_kind_from_name(std::string_view name);

}  // namespace netcons
