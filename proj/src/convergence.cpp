#include "sbpaction/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "sbpaction/linalg.hpp"
#include "sbpaction/problems.hpp"
#include "sbpaction/solver.hpp"

namespace sbpact {

std::pair<double, double> fit_order(const std::vector<double>& dts,
                                    const std::vector<double>& errs) {
  if (dts.size() != errs.size()) throw LengthMismatch("fit_order: length mismatch");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < dts.size(); ++i) {
    if (errs[i] >= kErrorFloor) {
      lx.push_back(std::log(dts[i]));
      ly.push_back(std::log(errs[i]));
    }
  }
  if (lx.size() < 3)
    throw TooFewPoints("fit_order: fewer than three errors above the floor");
  const LineFit fit = lstsq_line(Eigen::Map<const Vec>(lx.data(), lx.size()),
                                 Eigen::Map<const Vec>(ly.data(), ly.size()));
  return {fit.slope, fit.residual};
}

ConvergenceReport run_ladder(Family family, const std::map<std::string, double>& params,
                             const InitialData& data, SbpOrder order,
                             const std::vector<int>& nts, double t1, double t2,
                             std::optional<double> bvp_end) {
  if (nts.empty()) throw InvalidArgument("run_ladder: empty ladder");
  for (size_t i = 0; i < nts.size(); ++i) {
    if (nts[i] < 8) throw InvalidArgument("run_ladder: every nt must be >= 8");
    if (i > 0 && nts[i] <= nts[i - 1])
      throw InvalidArgument("run_ladder: nts must be ascending");
  }

  const ReferenceSolution ref = reference(family, params, data);

  ConvergenceReport report;
  report.family = family;
  report.order = order;

  for (const int nt : nts) {
    ActionProblem p{family, params, data, bvp_end, Grid(t1, t2, nt), order};
    SolveResult res;
    try {
      res = solve(p);
    } catch (const SingularKkt& e) {
      throw SingularKkt(std::string(e.what()) + " (nt=" + std::to_string(nt) + ")");
    } catch (const NoConvergence& e) {
      throw NoConvergence(std::string(e.what()) + " (nt=" + std::to_string(nt) + ")");
    }

    const SbpOperator op = build_sbp(p.grid, order);
    const Vec x1 = res.state.unknowns.head(nt);
    const auto [xref, vref] = ref(t2);

    double sup = 0.0;
    for (int k = 0; k < nt; ++k)
      sup = std::max(sup, std::fabs(x1(k) - ref(p.grid.node(k)).first));

    report.nts.push_back(nt);
    report.dts.push_back(p.grid.dt());
    report.value_errors.push_back(std::fabs(x1(nt - 1) - xref));
    report.deriv_errors.push_back(std::fabs(op.d.row(nt - 1).dot(x1) - vref));
    report.path_sup_errors.push_back(sup);
  }

  try {
    auto [slope, resid] = fit_order(report.dts, report.value_errors);
    report.value_slope = slope;
    report.value_residual = resid;
  } catch (const TooFewPoints&) {
  }
  try {
    auto [slope, resid] = fit_order(report.dts, report.deriv_errors);
    report.deriv_slope = slope;
    report.deriv_residual = resid;
  } catch (const TooFewPoints&) {
  }
  return report;
}

void write_report_csv(const ConvergenceReport& report, std::ostream& os) {
  os << "family,order,nt,dt,value_error,deriv_error\n";
  char buf[128];
  for (size_t i = 0; i < report.nts.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.17g,%.17g,%.17g\n",
                  to_string(report.family), to_string(report.order), report.nts[i],
                  report.dts[i], report.value_errors[i], report.deriv_errors[i]);
    os << buf;
  }
}

std::string report_summary_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["family"] = to_string(report.family);
  j["order"] = to_string(report.order);
  j["value_slope"] = report.value_slope ? nlohmann::json(*report.value_slope)
                                        : nlohmann::json(nullptr);
  j["deriv_slope"] = report.deriv_slope ? nlohmann::json(*report.deriv_slope)
                                        : nlohmann::json(nullptr);
  j["residuals"] = {{"value", report.value_residual}, {"deriv", report.deriv_residual}};
  j["path_sup_errors"] = report.path_sup_errors;
  return j.dump();
}

}  // namespace sbpact
