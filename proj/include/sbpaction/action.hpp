#pragma once

#include <map>
#include <optional>
#include <string>

#include "sbpaction/affine.hpp"
#include "sbpaction/sbp.hpp"
#include "sbpaction/types.hpp"

namespace sbpact {

/// The five supported variational problems. BvpGravity is the boundary
/// value formulation on a single path; the Ivp families use doubled
/// degrees of freedom (forward path x1, backward path x2).
enum class Family { BvpGravity, IvpGravity, IvpCubic, IvpExponential, IvpDampedHo };

const char* to_string(Family family);

/// Declarative description of one variational problem: family, named
/// parameters, initial data, grid and operator order. Immutable once built.
///
/// Required parameters: BvpGravity/IvpGravity {m, g}; IvpCubic {kappa};
/// IvpExponential {kappa}; IvpDampedHo {mu, kappa, xi}.
struct ActionProblem {
  Family family = Family::IvpGravity;
  std::map<std::string, double> params;
  InitialData data;
  std::optional<double> bvp_end;  // x_f, BvpGravity only
  Grid grid;
  SbpOrder order = SbpOrder::Sbp21;
};

/// Throws InvalidArgument unless the problem is well-formed (required
/// parameters present and no unknown ones, v0 present for second-order
/// families, bvp_end present for the BVP).
void validate(const ActionProblem& p);

int path_count(Family family);        // 1 for the BVP, 2 for IVPs
int constraint_count(Family family);  // 2 (BVP, first-order IVP) or 4

/// Total unknowns: path_count * nt + constraint_count.
int unknown_count(const ActionProblem& p);

/// Unknown vector and evaluation workspace. Layout of `unknowns`:
/// IVP families  [x1(0..nt-1) | x2(0..nt-1) | lambda...],
/// BvpGravity    [x(0..nt-1)  | lambda1 lambda2].
/// Second-order IVPs carry (lambda1, lambda2, lambda3, lambda4); the
/// first-order IVP carries (lambda1, lambda3).
struct SolverState {
  Vec unknowns;
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

/// Zero-initialized state with the layout of p.
SolverState make_state(const ActionProblem& p);

/// Default solver start: every path constant at x0, multipliers zero.
SolverState default_start(const ActionProblem& p);

double action_value(const ActionProblem& p, const SolverState& s);
Vec action_gradient(const ActionProblem& p, const SolverState& s);
Mat action_hessian(const ActionProblem& p, const SolverState& s);

/// Diagnostic for the gravity families: D(D x+) + g 1 with the
/// unregularized operator, x+ being the path mean (or the single BVP
/// path). Only rows whose double stencil stays clear of the boundary
/// closure are expected to be small.
Vec discrete_eom_residual(const ActionProblem& p, const SolverState& s);

/// Precomputed operator algebra for repeated evaluations of one problem.
/// All evaluation methods are pure; instances are immutable after
/// construction and safe to share across threads.
class ActionEvaluator {
 public:
  explicit ActionEvaluator(const ActionProblem& p);

  double value(const Vec& z) const;
  Vec gradient(const Vec& z) const;
  Mat hessian(const Vec& z) const;

  const ActionProblem& problem() const { return p_; }
  const SbpOperator& op() const { return op_; }
  int unknowns() const { return n_; }
  int nt() const { return nt_; }

  /// Constraint values at z, in multiplier order.
  Vec constraints(const Vec& z) const;

 private:
  void check(const Vec& z) const;
  Vec path1(const Vec& z) const { return z.head(nt_); }
  Vec path2(const Vec& z) const { return z.segment(nt_, nt_); }
  Vec multipliers(const Vec& z) const { return z.tail(nc_); }

  ActionProblem p_;
  SbpOperator op_;
  int nt_ = 0;
  int paths_ = 0;
  int nc_ = 0;
  int n_ = 0;

  Vec hw_;         // quadrature weights
  Mat dtil_;       // regularized path block D - sigma0 Hinv E0
  Vec b_;          // affine shift
  Mat a_;          // dtil^T H dtil (kinetic Hessian block)
  Vec ab_;         // dtil^T H b
  Mat a_plain_;    // d^T H d (BVP kinetic block)
  Mat sym_, asym_; // 0.5 (dtil^T H +/- H dtil), used by the Lambda term
  std::vector<Vec> crows_;  // constraint rows over path coordinates
};

}  // namespace sbpact
