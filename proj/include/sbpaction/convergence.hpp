#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sbpaction/action.hpp"
#include "sbpaction/types.hpp"

namespace sbpact {

/// Errors below this floor are rounding-dominated and excluded from
/// power-law fits.
inline constexpr double kErrorFloor = 1e-11;

/// Grid-refinement study of one family/order pair: endpoint value and
/// derivative errors against the reference, with fitted power laws.
/// Slopes are absent when fewer than three errors sit above the floor
/// (the scheme is exact to rounding on that family).
struct ConvergenceReport {
  Family family = Family::IvpGravity;
  SbpOrder order = SbpOrder::Sbp21;
  std::vector<int> nts;
  std::vector<double> dts;
  std::vector<double> value_errors;     // |x1(N) - x_ref(t2)|
  std::vector<double> deriv_errors;     // |(D x1)(N) - xdot_ref(t2)|
  std::vector<double> path_sup_errors;  // sup-norm over the whole path
  std::optional<double> value_slope;
  std::optional<double> deriv_slope;
  double value_residual = 0.0;
  double deriv_residual = 0.0;
};

/// Least-squares power-law exponent in log-log space, after dropping
/// points below the error floor. Throws TooFewPoints when fewer than
/// three points remain.
std::pair<double, double> fit_order(const std::vector<double>& dts,
                                    const std::vector<double>& errs);

/// Solve the family once per nt (ascending, each >= 8) on [t1, t2] and
/// measure errors at the final time. Solver failures propagate annotated
/// with the offending nt.
ConvergenceReport run_ladder(Family family, const std::map<std::string, double>& params,
                             const InitialData& data, SbpOrder order,
                             const std::vector<int>& nts, double t1 = 0.0,
                             double t2 = 1.0,
                             std::optional<double> bvp_end = std::nullopt);

/// CSV rows `family,order,nt,dt,value_error,deriv_error`.
void write_report_csv(const ConvergenceReport& report, std::ostream& os);

/// One-line JSON summary with keys family, order, value_slope,
/// deriv_slope, residuals and the supplementary whole-path sup errors.
std::string report_summary_json(const ConvergenceReport& report);

}  // namespace sbpact
