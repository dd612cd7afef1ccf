#pragma once

#include <vector>

#include "sbpaction/types.hpp"

namespace sbpact {

/// Uniform time grid on [t1, t2] with nt nodes, t_k = t1 + k dt and
/// dt = (t2 - t1) / (nt - 1).
struct Grid {
  double t1 = 0.0;
  double t2 = 1.0;
  int nt = 8;

  Grid() = default;  // smallest valid grid on the unit interval
  Grid(double t1_, double t2_, int nt_);

  double dt() const { return (t2 - t1) / (nt - 1); }
  double node(int k) const { return t1 + k * dt(); }
  Vec nodes() const;
};

enum class SbpOrder { Sbp21, Sbp42 };

const char* to_string(SbpOrder order);

/// First-derivative summation-by-parts operator pair on a uniform grid:
/// positive diagonal quadrature H and difference matrix D such that
/// Q = H D satisfies Q + Q^T = E_N - E_0 exactly. Immutable after build.
struct SbpOperator {
  Grid grid;
  SbpOrder order;
  Mat h;  // diagonal, strictly positive
  Mat d;

  int nt() const { return grid.nt; }
  Vec h_diag() const { return h.diagonal(); }

  /// Number of boundary-closure rows at each end (1 for SBP21, 4 for SBP42).
  int closure_rows() const { return order == SbpOrder::Sbp21 ? 1 : 4; }
};

/// Build the SBP21 or SBP42 operator pair. Stencils are exact rationals
/// scaled once by 1/dt so the SBP identity holds to rounding. Requires
/// nt >= 8 (SBP42 needs 4 closure rows at each end; the same floor is
/// used for SBP21 to keep one code path).
SbpOperator build_sbp(const Grid& grid, SbpOrder order);

/// Worst deviation of D t^k from k t^(k-1), split by boundary-closure and
/// interior rows, normalized by max(1, max |k t^(k-1)|).
struct MonomialAccuracy {
  int degree = 0;
  double boundary_err = 0.0;
  double interior_err = 0.0;
};

/// Check derivative exactness on monomials t^k up to one degree past the
/// operator's interior order. Report only; never throws.
std::vector<MonomialAccuracy> verify_accuracy(const SbpOperator& op);

/// Quadrature 1^T H f of nodal samples f.
double quadrature(const SbpOperator& op, const Vec& f);

}  // namespace sbpact
