#pragma once

#include <vector>

#include "sbpaction/types.hpp"

namespace sbpact {

/// Dense LU factorization with partial pivoting. The factorization is
/// declared singular when the smallest pivot magnitude falls below
/// 1e-14 times the largest pivot magnitude.
class LuSolver {
 public:
  explicit LuSolver(const Mat& a);  // throws SingularMatrix

  Vec solve(const Vec& b) const;

  /// Solve followed by one step of iterative refinement against the
  /// original matrix (must be the matrix this factorization was built from).
  Vec refined_solve(const Mat& a, const Vec& b) const;

  /// min |pivot| / max |pivot| of the U factor.
  double pivot_ratio() const { return pivot_ratio_; }

 private:
  Eigen::PartialPivLU<Mat> lu_;
  double pivot_ratio_ = 0.0;
  Eigen::Index n_ = 0;
};

/// Solve a x = b by LU with partial pivoting.
Vec lu_solve(const Mat& a, const Vec& b);

/// Eigenvalue set of a real square matrix together with the tolerance
/// used to classify eigenvalues as zero (1e-10 times the spectral radius).
struct Spectrum {
  std::vector<Cplx> eigenvalues;
  double zero_tolerance = 0.0;

  double spectral_radius() const;
  double min_abs() const;
  int count_zero() const { return count_below(zero_tolerance); }
  int count_below(double tol) const;
};

/// Eigenvalues via Householder Hessenberg reduction and Francis shifted
/// QR iteration. Desk-scale only (dimension <= 128); the iteration runs
/// in extended precision internally so that defective zero clusters are
/// resolved to the width the spectrum tests require instead of the
/// sqrt(eps) splitting double rounding would produce.
Spectrum eigenvalues(const Mat& a);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // l2 norm of the fit residual
};

/// Least-squares straight line through (xs, ys).
LineFit lstsq_line(const Vec& xs, const Vec& ys);

/// Rank by column-pivoted orthogonal elimination, counting pivots of
/// magnitude at least `threshold` (absolute).
int rank_with_threshold(const Mat& a, double threshold);

/// Unit left null vector of a (the null direction of a^T), from the
/// smallest singular direction.
Vec left_null_vector(const Mat& a);

}  // namespace sbpact
