#pragma once

#include <optional>

#include "sbpaction/sbp.hpp"
#include "sbpaction/types.hpp"

namespace sbpact {

/// Initial data of an IVP: position x0 and, for second-order problems,
/// velocity v0.
struct InitialData {
  double x0 = 0.0;
  std::optional<double> v0;
};

/// Regularized SBP operator in affine coordinates. The path block is
/// Dtilde = D - sigma0 Hinv E0 and the appended column carries the
/// initial-data shift b = sigma0 Hinv E0 g with g = (x0, 0, ..., 0), so
/// that Dbar xbar = (Dtilde x + b, 1) for xbar = (x, 1). Hbar is H padded
/// by one zero row and column; it discards the affine coordinate after
/// the operator has acted.
struct AffineOperator {
  SbpOperator base;
  double sigma0 = -1.0;
  Mat dbar;   // (nt+1) x (nt+1)
  Mat hbar;   // (nt+1) x (nt+1)
  Vec shift;  // b, length nt

  int nt() const { return base.nt(); }

  /// Path block Dtilde (upper-left nt x nt of dbar).
  Mat path_block() const { return dbar.topLeftCorner(nt(), nt()); }
};

/// Build the regularized operator with the fixed penalty sigma0 = -1.
AffineOperator build_affine(const SbpOperator& op, const InitialData& data);

/// Apply the regularized operator: returns Dtilde x + b (the affine
/// coordinate is dropped after application).
Vec affine_apply(const AffineOperator& aop, const Vec& x);

namespace detail {

/// Test hook: build with an arbitrary penalty coefficient. sigma0 = -1 is
/// the only value exposed by the public API.
AffineOperator build_affine_with_sigma(const SbpOperator& op, const InitialData& data,
                                       double sigma0);

}  // namespace detail

}  // namespace sbpact
