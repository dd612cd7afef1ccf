#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbpaction/action.hpp"
#include "sbpaction/types.hpp"

namespace sbpact {

enum class ReferenceKind { Closed, Oracle };

/// Reference trajectory, mapping t to (x, xdot). Closed forms are exact;
/// Oracle references come from the fixed-step RK4 integrator below.
struct ReferenceSolution {
  ReferenceKind kind = ReferenceKind::Closed;
  std::function<std::pair<double, double>(double)> eval;

  std::pair<double, double> operator()(double t) const { return eval(t); }
};

/// Classical fixed-step RK4 integration of the family's governing ODE
/// from t = 0 to t_eval. Test oracle only: the action solver itself never
/// touches the equation of motion. Requires fine_dt <= 1e-4 * t_eval
/// (for t_eval > 0); halving fine_dt changes the result below 1e-10.
std::pair<double, double> rk_oracle(Family family,
                                    const std::map<std::string, double>& params,
                                    const InitialData& data, double t_eval,
                                    double fine_dt);

/// Reference solution per family: closed forms for gravity, exponential
/// and the underdamped oscillator, the RK4 oracle for the cubic family.
/// Throws OverdampedUnsupported when xi^2 >= 4 mu kappa.
ReferenceSolution reference(Family family, const std::map<std::string, double>& params,
                            const InitialData& data);

/// Discrete energy and Noether charge diagnostics along a solved state.
/// Derivatives are taken with the unregularized difference operator, so
/// these are diagnostics that converge under refinement rather than
/// exactly conserved quantities.
struct EnergyTrace {
  Vec times;
  Vec energy;        // forward-path energy H+
  Vec noether_sum;   // H+ + H-
  Vec noether_diff;  // H+ - H-
};

EnergyTrace energy_trace(const ActionProblem& p, const SolverState& s);

/// Canonical instantiation of one model problem with the default
/// parameters used throughout the study.
struct ProblemSpec {
  std::string name;
  Family family;
  std::map<std::string, double> params;
  InitialData data;
  std::optional<double> bvp_end;
};

/// Registry: gravity-bvp, gravity, cubic, exponential, damped-ho.
const std::vector<ProblemSpec>& problem_registry();

/// Lookup by name; nullptr when unknown.
const ProblemSpec* find_problem(const std::string& name);

}  // namespace sbpact
