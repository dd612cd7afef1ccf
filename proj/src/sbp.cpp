#include "sbpaction/sbp.hpp"

#include <cmath>

namespace sbpact {

Grid::Grid(double t1_, double t2_, int nt_) : t1(t1_), t2(t2_), nt(nt_) {
  if (nt < 8) throw GridTooSmall("Grid: need at least 8 points");
  if (!(t2 > t1)) throw InvalidArgument("Grid: t2 must exceed t1");
  if (!std::isfinite(t1) || !std::isfinite(t2))
    throw InvalidArgument("Grid: endpoints must be finite");
}

Vec Grid::nodes() const {
  Vec t(nt);
  for (int k = 0; k < nt; ++k) t(k) = node(k);
  return t;
}

const char* to_string(SbpOrder order) {
  return order == SbpOrder::Sbp21 ? "sbp21" : "sbp42";
}

namespace {

// SBP42 boundary closure (four rows; mirrored with opposite sign at the
// far end). H weights 17/48, 59/48, 43/48, 49/48 then 1 in the interior.
constexpr double kH42[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};
constexpr double kD42[4][6] = {
    {-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0, 0.0, 0.0},
    {-1.0 / 2.0, 0.0, 1.0 / 2.0, 0.0, 0.0, 0.0},
    {4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0, 0.0},
    {3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0}};

}  // namespace

SbpOperator build_sbp(const Grid& grid, SbpOrder order) {
  const int nt = grid.nt;
  if (nt < 8) throw GridTooSmall("build_sbp: need at least 8 points");
  const double dt = grid.dt();
  const double inv = 1.0 / dt;

  Vec hw = Vec::Constant(nt, dt);
  Mat d = Mat::Zero(nt, nt);

  if (order == SbpOrder::Sbp21) {
    hw(0) = 0.5 * dt;
    hw(nt - 1) = 0.5 * dt;
    d(0, 0) = -inv;
    d(0, 1) = inv;
    for (int k = 1; k + 1 < nt; ++k) {
      d(k, k - 1) = -0.5 * inv;
      d(k, k + 1) = 0.5 * inv;
    }
    d(nt - 1, nt - 2) = -inv;
    d(nt - 1, nt - 1) = inv;
  } else {
    for (int i = 0; i < 4; ++i) {
      hw(i) = kH42[i] * dt;
      hw(nt - 1 - i) = kH42[i] * dt;
    }
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 6; ++c) {
        d(r, c) = kD42[r][c] * inv;
        d(nt - 1 - r, nt - 1 - c) = -kD42[r][c] * inv;
      }
    for (int k = 4; k + 4 < nt; ++k) {
      d(k, k - 2) = inv / 12.0;
      d(k, k - 1) = -2.0 * inv / 3.0;
      d(k, k + 1) = 2.0 * inv / 3.0;
      d(k, k + 2) = -inv / 12.0;
    }
  }

  SbpOperator op{grid, order, Mat(hw.asDiagonal()), std::move(d)};
  return op;
}

std::vector<MonomialAccuracy> verify_accuracy(const SbpOperator& op) {
  const int nt = op.nt();
  const int nb = op.closure_rows();
  const int kmax = (op.order == SbpOrder::Sbp21 ? 2 : 4) + 1;
  const Vec t = op.grid.nodes();

  std::vector<MonomialAccuracy> report;
  report.reserve(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    Vec f(nt), df(nt);
    for (int i = 0; i < nt; ++i) {
      f(i) = std::pow(t(i), k);
      df(i) = (k == 0) ? 0.0 : k * std::pow(t(i), k - 1);
    }
    const Vec err = op.d * f - df;
    const double scale = std::max(1.0, df.lpNorm<Eigen::Infinity>());
    MonomialAccuracy row;
    row.degree = k;
    for (int i = 0; i < nt; ++i) {
      const double e = std::fabs(err(i)) / scale;
      if (i < nb || i >= nt - nb)
        row.boundary_err = std::max(row.boundary_err, e);
      else
        row.interior_err = std::max(row.interior_err, e);
    }
    report.push_back(row);
  }
  return report;
}

double quadrature(const SbpOperator& op, const Vec& f) {
  if (f.size() != op.nt()) throw LengthMismatch("quadrature: length mismatch");
  return op.h.diagonal().dot(f);
}

}  // namespace sbpact
