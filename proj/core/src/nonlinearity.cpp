#include "netcons/nonlinearity.hpp"

#include <sstream>
#include <string>

#include "netcons/errors.hpp"

namespace netcons {

double Nonlinearity::operator()(double u) const noexcept {
    switch (kind_) {
        case NonlinearityKind::Identity: return u;
        case NonlinearityKind::Affine: return beta_ * u + gamma_;
        case NonlinearityKind::CubicAffine: return alpha_ * u * u * u + beta_ * u + gamma_;
        case NonlinearityKind::ShiftedCube: {
            const double s = u - gamma_;
            return s * s * s;
        }
    }
    return u;
}

double Nonlinearity::derivative(double u) const noexcept {
    switch (kind_) {
        case NonlinearityKind::Identity: return 1.0;
        case NonlinearityKind::Affine: return beta_;
        case NonlinearityKind::CubicAffine: return 3.0 * alpha_ * u * u + beta_;
        case NonlinearityKind::ShiftedCube: {
            const double s = u - gamma_;
            return 3.0 * s * s;
        }
    }
    return 1.0;
}

std::string_view Nonlinearity::name() const noexcept {
    switch (kind_) {
        case NonlinearityKind::Identity: return "identity";
        case NonlinearityKind::Affine: return "affine";
        case NonlinearityKind::CubicAffine: return "cubic_affine";
        case NonlinearityKind::ShiftedCube: return "shifted_cube";
    }
    return "identity";
}

std::string Nonlinearity::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case NonlinearityKind::Identity: os << "u"; break;
        case NonlinearityKind::Affine: os << beta_ << "*u + " << gamma_; break;
        case NonlinearityKind::CubicAffine: os << alpha_ << "*u^3 + " << beta_ << "*u + " << gamma_; break;
        case NonlinearityKind::ShiftedCube: os << "(u - " << gamma_ << ")^3"; break;
    }
    return os.str();
}

NonlinearityKind nonlinearity_kind_from_name(std::string_view name) {
    if (name == "identity") return NonlinearityKind::Identity;
    if (name == "affine") return NonlinearityKind::Affine;
    if (name == "cubic_affine") return NonlinearityKind::CubicAffine;
    if (name == "shifted_cube") return NonlinearityKind::ShiftedCube;
    throw Error(ErrorCode::ParseError, "unknown nonlinearity '" + std::string(name) + "'");
}

}  // namespace netcons
