#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sbpaction/convergence.hpp"
#include "sbpaction/problems.hpp"

using namespace sbpact;

TEST_CASE("fit_order on an exact quadratic decay") {
  auto [slope, resid] = fit_order({1.0 / 16, 1.0 / 32, 1.0 / 64},
                                  {1e-2, 2.5e-3, 6.25e-4});
  CHECK(slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(resid < 1e-12);
}

TEST_CASE("fit_order recovers synthetic power laws to 1e-8") {
  for (double p : {1.0, 2.0, 3.35}) {
    std::vector<double> dts, errs;
    for (int nt : {16, 32, 64, 128, 256, 512}) {
      const double dt = 1.0 / (nt - 1);
      dts.push_back(dt);
      errs.push_back(0.8 * std::pow(dt, p));
    }
    auto [slope, resid] = fit_order(dts, errs);
    CHECK(std::fabs(slope - p) < 1e-8);
  }
}

TEST_CASE("fit_order floors rounding-dominated points") {
  // the fourth point sits below 1e-11 and must not corrupt the fit
  std::vector<double> dts = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  std::vector<double> errs = {1e-6, 2.5e-7, 6.25e-8, 1e-13};
  auto [slope, resid] = fit_order(dts, errs);
  CHECK(slope == doctest::Approx(2.0).epsilon(1e-10));

  CHECK_THROWS_AS(fit_order({0.1, 0.05, 0.025}, {1e-13, 1e-13, 1e-6}), TooFewPoints);
  CHECK_THROWS_AS(fit_order({0.1, 0.05}, {1e-3, 1e-4}), TooFewPoints);
}

TEST_CASE("gravity ladder with sbp42 sits at the rounding floor") {
  const ProblemSpec* spec = find_problem("gravity");
  ConvergenceReport r = run_ladder(spec->family, spec->params, spec->data,
                                   SbpOrder::Sbp42, {16, 32, 64});
  for (double e : r.value_errors) CHECK(e <= 1e-11);
  CHECK(!r.value_slope.has_value());
}

TEST_CASE("gravity ladder with sbp21 shows second-order convergence") {
  const ProblemSpec* spec = find_problem("gravity");
  ConvergenceReport r = run_ladder(spec->family, spec->params, spec->data,
                                   SbpOrder::Sbp21, {16, 32, 64, 128, 256, 512});
  REQUIRE(r.value_slope.has_value());
  CHECK(std::fabs(*r.value_slope - 2.03) <= 0.15);
  for (size_t i = 1; i < r.value_errors.size(); ++i)
    CHECK(r.value_errors[i] < r.value_errors[i - 1]);
  // the endpoint value converges one order faster than the derivative
  REQUIRE(r.deriv_slope.has_value());
  const double gap = *r.value_slope - *r.deriv_slope;
  CHECK(gap >= 0.7);
  CHECK(gap <= 1.3);
}

TEST_CASE("exponential ladder keeps the one-order value/derivative gap") {
  const ProblemSpec* spec = find_problem("exponential");
  ConvergenceReport r = run_ladder(spec->family, spec->params, spec->data,
                                   SbpOrder::Sbp21, {16, 32, 64, 128, 256});
  REQUIRE(r.value_slope.has_value());
  REQUIRE(r.deriv_slope.has_value());
  const double gap = *r.value_slope - *r.deriv_slope;
  CHECK(gap >= 0.7);
  CHECK(gap <= 1.3);
  for (size_t i = 1; i < r.value_errors.size(); ++i)
    CHECK(r.value_errors[i] < r.value_errors[i - 1]);
}

TEST_CASE("run_ladder validates its ladder") {
  const ProblemSpec* spec = find_problem("gravity");
  CHECK_THROWS_AS(run_ladder(spec->family, spec->params, spec->data, SbpOrder::Sbp21,
                             {32, 16}),
                  InvalidArgument);
  CHECK_THROWS_AS(run_ladder(spec->family, spec->params, spec->data, SbpOrder::Sbp21,
                             {4, 16}),
                  InvalidArgument);
  CHECK_THROWS_AS(run_ladder(spec->family, spec->params, spec->data, SbpOrder::Sbp21,
                             {}),
                  InvalidArgument);
}

TEST_CASE("report serialization schema") {
  const ProblemSpec* spec = find_problem("gravity");
  ConvergenceReport r = run_ladder(spec->family, spec->params, spec->data,
                                   SbpOrder::Sbp21, {16, 32, 64});
  std::ostringstream os;
  write_report_csv(r, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "family,order,nt,dt,value_error,deriv_error");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);

  const nlohmann::json j = nlohmann::json::parse(report_summary_json(r));
  CHECK(j.at("family") == "gravity");
  CHECK(j.at("order") == "sbp21");
  CHECK(j.at("value_slope").is_number());
  CHECK(j.at("deriv_slope").is_number());
  CHECK(j.contains("residuals"));
  CHECK(j.at("path_sup_errors").size() == 3);
}
