#pragma once

// Shared scalar/vector aliases, tolerance bundle and the error hierarchy used
// across the library.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace threecircle {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr cplx I_unit{0.0, 1.0};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or radius outside the region where an operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Breakdown of a numerical procedure (step underflow, NaN, singular matrix).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Invalid user input (bad parameters, unknown catalog names, malformed config).
class ConfigError : public Error {
public:
    using Error::Error;
};

struct ToleranceBundle {
    double ode_rel = 1e-10;
    double ode_abs = 1e-12;
    double tensor_rel = 1e-6;
    double convexity_slack = 1e-6;

    void validate() const {
        if (!(ode_rel > 0 && ode_abs > 0 && tensor_rel > 0 && convexity_slack > 0)) {
            throw ConfigError("tolerances must be strictly positive");
        }
    }

    [[nodiscard]] ToleranceBundle scaled(double factor) const {
        ToleranceBundle t = *this;
        t.ode_rel *= factor;
        t.ode_abs *= factor;
        t.tensor_rel *= factor;
        t.convexity_slack *= factor;
        t.validate();
        return t;
    }
};

}  // namespace threecircle
