#include "sbpaction/affine.hpp"

#include <cmath>

namespace sbpact {

namespace detail {

AffineOperator build_affine_with_sigma(const SbpOperator& op, const InitialData& data,
                                       double sigma0) {
  if (!std::isfinite(data.x0))
    throw InvalidArgument("build_affine: x0 must be finite");
  if (data.v0 && !std::isfinite(*data.v0))
    throw InvalidArgument("build_affine: v0 must be finite");

  const int nt = op.nt();
  const double h00 = op.h(0, 0);

  AffineOperator aop{op, sigma0, Mat::Zero(nt + 1, nt + 1), Mat::Zero(nt + 1, nt + 1),
                     Vec::Zero(nt)};

  // E0 projects onto the first node, so only g(0) = x0 enters the shift.
  aop.shift(0) = sigma0 * data.x0 / h00;

  aop.dbar.topLeftCorner(nt, nt) = op.d;
  aop.dbar(0, 0) -= sigma0 / h00;
  aop.dbar.col(nt).head(nt) = aop.shift;
  aop.dbar(nt, nt) = 1.0;

  aop.hbar.topLeftCorner(nt, nt) = op.h;
  return aop;
}

}  // namespace detail

AffineOperator build_affine(const SbpOperator& op, const InitialData& data) {
  return detail::build_affine_with_sigma(op, data, -1.0);
}

Vec affine_apply(const AffineOperator& aop, const Vec& x) {
  if (x.size() != aop.nt()) throw LengthMismatch("affine_apply: length mismatch");
  Vec y = aop.base.d * x + aop.shift;
  y(0) -= aop.sigma0 / aop.base.h(0, 0) * x(0);
  return y;
}

}  // namespace sbpact
