#pragma once

#include <optional>

#include "sbpaction/action.hpp"
#include "sbpaction/types.hpp"

namespace sbpact {

struct SolverConfig {
  int max_newton_iters = 50;
  double grad_tol = 1e-11;     // absolute bound on the sup norm of the gradient
  bool fallback_enabled = true;
  double damping = 1.0;        // initial Newton step scale
  double ls_shrink = 0.5;      // backtracking shrink factor, in (0, 1)
  int ls_max = 30;             // maximum backtracks per iteration
};

void validate(const SolverConfig& cfg);

struct SolveResult {
  SolverState state;
  int iterations = 0;
  double final_grad_norm = 0.0;
  bool used_fallback = false;
};

/// Newton iteration on grad S = 0 for the full saddle system (paths and
/// multipliers), with backtracking on the gradient norm and an optional
/// damped Gauss-Newton fallback that minimizes 0.5 |grad S|^2 when Newton
/// stalls. Quadratic families converge in a single step from any start.
/// Deterministic: identical inputs give bitwise-identical results.
///
/// Throws SingularKkt when the Newton system cannot be factored and
/// NoConvergence when the iteration budget is exhausted.
SolveResult solve(const ActionProblem& p, const SolverConfig& cfg = {},
                  const std::optional<SolverState>& init = std::nullopt);

/// Stationary point of the UNREGULARIZED doubled IVP functional for the
/// gravity family. Demonstration path: it either throws SingularKkt or
/// returns a state contaminated by the oscillatory near-null mode of the
/// plain difference operator (only half of the path nodes track the true
/// trajectory). Never use for production solves.
SolveResult solve_naive(const ActionProblem& p, const SolverConfig& cfg = {});

/// KKT matrix (Hessian) of the unregularized gravity IVP functional,
/// exposed for the failure-mode spectrum diagnostics.
Mat naive_kkt_matrix(const ActionProblem& p);

}  // namespace sbpact
