// Command-line runner: solve the model problems, dump operators and
// spectra, run convergence ladders and the long-time oscillator study.
// All outputs are plain CSV (with an occasional trailing JSON comment
// line) meant for external plotting tools.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sbpaction/affine.hpp"
#include "sbpaction/convergence.hpp"
#include "sbpaction/linalg.hpp"
#include "sbpaction/problems.hpp"
#include "sbpaction/solver.hpp"

namespace {

using namespace sbpact;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

SbpOrder parse_order(const std::string& name) {
  if (name == "sbp21") return SbpOrder::Sbp21;
  if (name == "sbp42") return SbpOrder::Sbp42;
  throw CLI::ValidationError("--order", "expected sbp21 or sbp42");
}

std::map<std::string, double> merge_params(const ProblemSpec& spec,
                                           const std::vector<std::string>& overrides) {
  auto params = spec.params;
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param", "expected name=value, got " + kv);
    params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return params;
}

void write_matrix_csv(const Mat& a, const std::filesystem::path& path) {
  std::ofstream os(path);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      os << (j ? "," : "") << fmt(a(i, j));
    os << "\n";
  }
}

void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path) {
  std::ofstream os(path);
  os << "re,im\n";
  for (const Cplx& ev : spec.eigenvalues)
    os << fmt(ev.real()) << "," << fmt(ev.imag()) << "\n";
}

void write_trajectory_csv(const ActionProblem& p, const SolverState& state,
                          const std::filesystem::path& path) {
  std::ofstream os(path);
  const int nt = p.grid.nt;
  const bool doubled = path_count(p.family) == 2;
  os << (doubled ? "t,x1,x2\n" : "t,x1\n");
  for (int k = 0; k < nt; ++k) {
    os << fmt(p.grid.node(k)) << "," << fmt(state.unknowns(k));
    if (doubled) os << "," << fmt(state.unknowns(nt + k));
    os << "\n";
  }
  nlohmann::json tail;
  tail["lambda"] = std::vector<double>(
      state.unknowns.data() + path_count(p.family) * nt,
      state.unknowns.data() + state.unknowns.size());
  os << "# " << tail.dump() << "\n";
}

std::vector<int> parse_nts(const std::string& csv) {
  std::vector<int> nts;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) nts.push_back(std::stoi(item));
  return nts;
}

struct SolveArgs {
  std::string problem;
  std::string order = "sbp21";
  int nt = 32;
  double t1 = 0.0, t2 = 1.0;
  double x0 = 0.0;
  double v0 = 0.0;
  bool has_v0 = false;
  double xf = 0.0;
  bool has_xf = false;
  std::vector<std::string> params;
  std::string out;  // set per subcommand before dispatch
};

ActionProblem build_problem(const SolveArgs& args) {
  const ProblemSpec* spec = find_problem(args.problem);
  if (!spec) throw CLI::ValidationError("--problem", "unknown problem " + args.problem);

  ActionProblem p;
  p.family = spec->family;
  p.params = merge_params(*spec, args.params);
  p.data.x0 = args.x0;
  if (path_count(spec->family) == 2 && constraint_count(spec->family) == 4)
    p.data.v0 = args.has_v0 ? args.v0 : 0.0;
  if (spec->family == Family::BvpGravity)
    p.bvp_end = args.has_xf ? args.xf : spec->bvp_end;
  p.grid = Grid(args.t1, args.t2, args.nt);
  p.order = parse_order(args.order);
  validate(p);
  return p;
}

int cmd_solve(const SolveArgs& args, bool naive) {
  const ActionProblem p = build_problem(args);
  SolveResult res;
  try {
    res = naive ? solve_naive(p) : solve(p);
  } catch (const Error& e) {
    std::cerr << "solver failed: " << e.what() << "\n";
    return 2;
  }
  write_trajectory_csv(p, res.state, args.out);
  std::cout << "converged in " << res.iterations
            << " iteration(s), |grad| = " << fmt(res.final_grad_norm)
            << ", x1(t2) = " << fmt(res.state.unknowns(p.grid.nt - 1)) << "\n";
  return 0;
}

int cmd_operators(const std::string& order_name, int nt, double t1, double t2,
                  double x0, double v0, const std::string& out_dir) {
  const SbpOrder order = parse_order(order_name);
  const SbpOperator op = build_sbp(Grid(t1, t2, nt), order);
  const AffineOperator aop = build_affine(op, InitialData{x0, v0});

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_matrix_csv(op.h, dir / "H.csv");
  write_matrix_csv(op.d, dir / "D.csv");
  write_matrix_csv(aop.dbar, dir / "Dbar.csv");
  write_spectrum_csv(eigenvalues(op.d), dir / "spectrum_D.csv");
  write_spectrum_csv(eigenvalues(aop.dbar), dir / "spectrum_Dbar.csv");

  std::ofstream os(dir / "left_nullvec_D.csv");
  os << "value\n";
  const Vec w = left_null_vector(op.d);
  for (int k = 0; k < op.nt(); ++k) os << fmt(w(k)) << "\n";
  return 0;
}

int cmd_converge(const SolveArgs& args, const std::string& nts_csv) {
  const ProblemSpec* spec = find_problem(args.problem);
  if (!spec) throw CLI::ValidationError("--problem", "unknown problem " + args.problem);
  const auto params = merge_params(*spec, args.params);
  const std::vector<int> nts = parse_nts(nts_csv);

  ConvergenceReport report;
  try {
    report = run_ladder(spec->family, params, spec->data, parse_order(args.order), nts,
                        args.t1, args.t2, spec->bvp_end);
  } catch (const Error& e) {
    std::cerr << "ladder failed: " << e.what() << "\n";
    return 2;
  }

  std::ofstream os(args.out);
  write_report_csv(report, os);
  os << "# " << report_summary_json(report) << "\n";

  auto describe = [](const std::optional<double>& slope) {
    return slope ? fmt(*slope) : std::string("floor");
  };
  std::cout << report_summary_json(report) << "\n";
  std::cout << "value slope: " << describe(report.value_slope)
            << "  deriv slope: " << describe(report.deriv_slope) << "\n";
  return 0;
}

int cmd_longtime(const std::string& nts_csv, double t2, const std::string& order_name,
                 const std::string& out_dir) {
  const ProblemSpec* spec = find_problem("damped-ho");
  const SbpOrder order = parse_order(order_name);
  const std::vector<int> nts = parse_nts(nts_csv);
  const ReferenceSolution ref = reference(spec->family, spec->params, spec->data);
  const double mu = spec->params.at("mu");
  const double kappa = spec->params.at("kappa");

  std::filesystem::create_directories(out_dir);
  for (const int nt : nts) {
    ActionProblem p{spec->family, spec->params, spec->data, std::nullopt,
                    Grid(0.0, t2, nt), order};
    SolveResult res;
    try {
      res = solve(p);
    } catch (const Error& e) {
      std::cerr << "longtime solve failed at nt=" << nt << ": " << e.what() << "\n";
      return 2;
    }
    const EnergyTrace tr = energy_trace(p, res.state);

    std::ofstream os(std::filesystem::path(out_dir) /
                     ("damped_ho_nt" + std::to_string(nt) + ".csv"));
    os << "t,x1,energy,noether_sum,noether_diff\n";
    double max_dev = 0.0;
    for (int k = 0; k < nt; ++k) {
      const auto [xr, vr] = ref(tr.times(k));
      const double eref = 0.5 * mu * vr * vr + kappa * xr * xr;
      max_dev = std::max(max_dev, std::fabs(tr.energy(k) - eref));
      os << fmt(tr.times(k)) << "," << fmt(res.state.unknowns(k)) << ","
         << fmt(tr.energy(k)) << "," << fmt(tr.noether_sum(k)) << ","
         << fmt(tr.noether_diff(k)) << "\n";
    }
    std::cout << "nt=" << nt << " dt=" << fmt(p.grid.dt())
              << " max_energy_deviation=" << fmt(max_dev) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational IVP solver on regularized summation-by-parts operators"};
  app.require_subcommand(1);

  SolveArgs sargs;
  std::string solve_out = "trajectory.csv";
  std::string naive_out = "naive.csv";
  std::string cv_out = "convergence.csv";

  auto* solve_cmd = app.add_subcommand("solve", "solve one problem and dump the paths");
  solve_cmd->add_option("--problem", sargs.problem, "registry name")->required();
  solve_cmd->add_option("--order", sargs.order, "sbp21 or sbp42");
  solve_cmd->add_option("--nt", sargs.nt, "grid points");
  solve_cmd->add_option("--t1", sargs.t1, "start time");
  solve_cmd->add_option("--t2", sargs.t2, "final time");
  solve_cmd->add_option("--x0", sargs.x0, "initial position")->required();
  auto* v0opt = solve_cmd->add_option("--v0", sargs.v0, "initial velocity");
  auto* xfopt = solve_cmd->add_option("--xf", sargs.xf, "final position (BVP)");
  solve_cmd->add_option("--param", sargs.params, "override name=value");
  solve_cmd->add_option("--out", solve_out, "output CSV");

  auto* naive_cmd =
      app.add_subcommand("naive", "unregularized gravity IVP (failure demo)");
  naive_cmd->add_option("--order", sargs.order, "sbp21 or sbp42");
  naive_cmd->add_option("--nt", sargs.nt, "grid points");
  naive_cmd->add_option("--t1", sargs.t1, "start time");
  naive_cmd->add_option("--t2", sargs.t2, "final time");
  naive_cmd->add_option("--x0", sargs.x0, "initial position")->required();
  auto* nv0opt = naive_cmd->add_option("--v0", sargs.v0, "initial velocity");
  naive_cmd->add_option("--param", sargs.params, "override name=value");
  naive_cmd->add_option("--out", naive_out, "output CSV");

  std::string op_order = "sbp21", op_out = "operators-out";
  int op_nt = 32;
  double op_t1 = 0.0, op_t2 = 1.0, op_x0 = 1.0, op_v0 = 0.0;
  auto* ops_cmd = app.add_subcommand("operators", "dump H, D, Dbar and spectra");
  ops_cmd->add_option("--order", op_order, "sbp21 or sbp42");
  ops_cmd->add_option("--nt", op_nt, "grid points (<= 128, desk-scale spectra)")
      ->check(CLI::Range(8, 128));
  ops_cmd->add_option("--t1", op_t1, "start time");
  ops_cmd->add_option("--t2", op_t2, "final time");
  ops_cmd->add_option("--x0", op_x0, "initial position entering Dbar");
  ops_cmd->add_option("--v0", op_v0, "initial velocity entering the data vector");
  ops_cmd->add_option("--out", op_out, "output directory");

  std::string cv_nts = "16,32,64,128,256,512";
  auto* cv_cmd = app.add_subcommand("converge", "grid-refinement ladder");
  cv_cmd->add_option("--problem", sargs.problem, "registry name")->required();
  cv_cmd->add_option("--order", sargs.order, "sbp21 or sbp42");
  cv_cmd->add_option("--nts", cv_nts, "comma list of grid sizes");
  cv_cmd->add_option("--t1", sargs.t1, "start time");
  cv_cmd->add_option("--t2", sargs.t2, "final time");
  cv_cmd->add_option("--param", sargs.params, "override name=value");
  cv_cmd->add_option("--out", cv_out, "output CSV");

  std::string lt_nts = "513,1025,2049", lt_order = "sbp42", lt_out = "longtime-out";
  double lt_t2 = 204.8;
  auto* lt_cmd = app.add_subcommand("longtime", "long-time damped oscillator study");
  lt_cmd->add_option("--nts", lt_nts, "comma list of grid sizes");
  lt_cmd->add_option("--t2", lt_t2, "final time");
  lt_cmd->add_option("--order", lt_order, "sbp21 or sbp42");
  lt_cmd->add_option("--out", lt_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help() << "\n";
    return 1;
  }

  sargs.has_v0 = v0opt->count() > 0 || nv0opt->count() > 0;
  sargs.has_xf = xfopt->count() > 0;

  try {
    if (solve_cmd->parsed()) return cmd_solve(sargs, false);
    if (naive_cmd->parsed()) {
      sargs.problem = "gravity";
      return cmd_solve(sargs, true);
    }
    if (ops_cmd->parsed())
      return cmd_operators(op_order, op_nt, op_t1, op_t2, op_x0, op_v0, op_out);
    if (cv_cmd->parsed()) return cmd_converge(sargs, cv_nts);
    if (lt_cmd->parsed()) return cmd_longtime(lt_nts, lt_t2, lt_order, lt_out);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 1;
  } catch (const GridTooSmall& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
