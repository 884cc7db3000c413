#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chirpmem {

using cplx = std::complex<double>;
using Vector3c = Eigen::Vector3cd;
using Vector3r = Eigen::Vector3d;

/// 3x3 complex time-evolution matrix in the lab rotating frame.
///
/// Column j holds the evolved basis state |j+1>; element (i, j) is the
/// amplitude <i+1|U|j+1>.  Indices are zero-based in code, so the element the
/// physics literature calls U_12 is `U(0, 1)`.
using Propagator3 = Eigen::Matrix3cd;

/// Base class for every error this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive or fixed-step ODE integration could not meet its tolerance.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature did not converge.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// The pulse sweep does not cross both optical resonances of the atom.
class NotAdiabaticWindow : public Error {
public:
    using Error::Error;
};

/// A solved echo time would fall inside the last control-pulse window.
class EchoInsidePulse : public Error {
public:
    using Error::Error;
};

/// Input parameters violate a documented invariant.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace chirpmem
