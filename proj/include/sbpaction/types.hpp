#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace sbpact {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Cplx = std::complex<double>;

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error { using Error::Error; };

// linalg
struct SingularMatrix : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct DegenerateAbscissa : Error { using Error::Error; };

// sbp / affine
struct GridTooSmall : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };

// action / solver
struct LayoutMismatch : Error { using Error::Error; };
struct SingularKkt : Error { using Error::Error; };

// problems / convergence
struct OverdampedUnsupported : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };

}  // namespace sbpact
