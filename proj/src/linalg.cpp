#include "sbpaction/linalg.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>

#include "sbpaction/hessenberg_qr.hpp"

namespace sbpact {

namespace detail {

template <>
struct FloatTraits<__float128> {
  static __float128 abs(__float128 x) { return fabsq(x); }
  static __float128 sqrt(__float128 x) { return sqrtq(x); }
  static __float128 epsilon() { return FLT128_EPSILON; }
};

}  // namespace detail

namespace {

void require_square_finite(const Mat& a, const char* who) {
  if (a.rows() != a.cols())
    throw InvalidArgument(std::string(who) + ": matrix must be square");
  if (!a.allFinite())
    throw InvalidArgument(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace

LuSolver::LuSolver(const Mat& a) {
  require_square_finite(a, "LuSolver");
  n_ = a.rows();
  lu_.compute(a);
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (Eigen::Index i = 0; i < n_; ++i) {
    const double p = std::fabs(lu_.matrixLU()(i, i));
    dmin = std::min(dmin, p);
    dmax = std::max(dmax, p);
  }
  pivot_ratio_ = (dmax > 0.0) ? dmin / dmax : 0.0;
  if (dmin < 1e-14 * dmax || dmax == 0.0)
    throw SingularMatrix("LuSolver: pivot below 1e-14 of the largest pivot");
}

Vec LuSolver::solve(const Vec& b) const {
  if (b.size() != n_) throw LengthMismatch("LuSolver::solve: length mismatch");
  return lu_.solve(b);
}

Vec LuSolver::refined_solve(const Mat& a, const Vec& b) const {
  Vec x = solve(b);
  x += lu_.solve(b - a * x);
  return x;
}

Vec lu_solve(const Mat& a, const Vec& b) {
  LuSolver lu(a);
  return lu.refined_solve(a, b);
}

double Spectrum::spectral_radius() const {
  double r = 0.0;
  for (const Cplx& ev : eigenvalues) r = std::max(r, std::abs(ev));
  return r;
}

double Spectrum::min_abs() const {
  double r = std::numeric_limits<double>::infinity();
  for (const Cplx& ev : eigenvalues) r = std::min(r, std::abs(ev));
  return r;
}

int Spectrum::count_below(double tol) const {
  int n = 0;
  for (const Cplx& ev : eigenvalues)
    if (std::abs(ev) < tol) ++n;
  return n;
}

Spectrum eigenvalues(const Mat& a) {
  require_square_finite(a, "eigenvalues");
  const int n = static_cast<int>(a.rows());
  if (n > 128)
    throw InvalidArgument("eigenvalues: desk-scale spectra only (dimension <= 128)");

  detail::WorkMatrix<__float128> w(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = static_cast<__float128>(a(i, j));
  auto raw = detail::dense_eigenvalues(w);

  Spectrum spec;
  spec.eigenvalues.reserve(n);
  for (const auto& [re, im] : raw)
    spec.eigenvalues.emplace_back(static_cast<double>(re), static_cast<double>(im));
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(),
            [](const Cplx& x, const Cplx& y) {
              if (x.real() != y.real()) return x.real() < y.real();
              return x.imag() < y.imag();
            });
  spec.zero_tolerance = 1e-10 * spec.spectral_radius();
  return spec;
}

LineFit lstsq_line(const Vec& xs, const Vec& ys) {
  if (xs.size() != ys.size()) throw LengthMismatch("lstsq_line: length mismatch");
  if (xs.size() < 2) throw InvalidArgument("lstsq_line: need at least two points");
  const double n = static_cast<double>(xs.size());
  const double xbar = xs.mean();
  const double ybar = ys.mean();
  const double sxx = (xs.array() - xbar).square().sum();
  if (sxx == 0.0) throw DegenerateAbscissa("lstsq_line: abscissa variance is zero");
  const double sxy = ((xs.array() - xbar) * (ys.array() - ybar)).sum();
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.residual =
      (ys.array() - fit.intercept - fit.slope * xs.array()).matrix().norm();
  (void)n;
  return fit;
}

int rank_with_threshold(const Mat& a, double threshold) {
  if (!a.allFinite()) throw InvalidArgument("rank_with_threshold: non-finite entries");
  Eigen::ColPivHouseholderQR<Mat> qr(a);
  const Eigen::Index m = std::min(a.rows(), a.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (std::fabs(qr.matrixR()(i, i)) >= threshold) ++rank;
  return rank;
}

Vec left_null_vector(const Mat& a) {
  require_square_finite(a, "left_null_vector");
  Eigen::JacobiSVD<Mat> svd(a.transpose(), Eigen::ComputeFullV);
  return svd.matrixV().col(a.cols() - 1);
}

}  // namespace sbpact
