#include "sbpaction/solver.hpp"

#include <cmath>

#include "sbpaction/linalg.hpp"

namespace sbpact {

void validate(const SolverConfig& cfg) {
  if (cfg.max_newton_iters < 0) throw InvalidArgument("max_newton_iters must be >= 0");
  if (!(cfg.grad_tol > 0)) throw InvalidArgument("grad_tol must be positive");
  if (!(cfg.damping > 0)) throw InvalidArgument("damping must be positive");
  if (!(cfg.ls_shrink > 0 && cfg.ls_shrink < 1))
    throw InvalidArgument("ls_shrink must lie in (0, 1)");
  if (cfg.ls_max < 0) throw InvalidArgument("ls_max must be >= 0");
}

namespace {

// Damped Gauss-Newton sweep on 0.5 |grad S|^2; used only when plain
// Newton stalls. Returns true when it managed to reduce the merit.
bool gauss_newton_sweep(const ActionEvaluator& ev, Vec& z, double grad_tol) {
  double nu = 1e-10;
  bool improved = false;
  for (int inner = 0; inner < 10; ++inner) {
    const Vec g = ev.gradient(z);
    const double phi0 = g.squaredNorm();
    if (std::sqrt(phi0) <= grad_tol) return true;
    const Mat k = ev.hessian(z);
    const Mat ktk = k.transpose() * k;
    const double scale = ktk.diagonal().maxCoeff();
    Vec dz;
    try {
      LuSolver lu(ktk + nu * scale * Mat::Identity(k.rows(), k.cols()));
      dz = lu.solve(-(k.transpose() * g));
    } catch (const SingularMatrix&) {
      nu = (nu == 0.0) ? 1e-10 : nu * 100.0;
      continue;
    }
    if (ev.gradient(z + dz).squaredNorm() < phi0) {
      z += dz;
      nu = std::max(nu * 0.1, 1e-14);
      improved = true;
    } else {
      nu *= 100.0;
      if (nu > 1e6) break;
    }
  }
  return improved;
}

SolveResult newton_solve(const ActionEvaluator& ev, const SolverConfig& cfg, Vec z) {
  SolveResult res;
  Vec g = ev.gradient(z);
  int stall = 0;

  while (true) {
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    if (gnorm <= cfg.grad_tol) break;
    if (res.iterations >= cfg.max_newton_iters)
      throw NoConvergence("solve: Newton budget exhausted, |grad| = " +
                          std::to_string(gnorm));
    ++res.iterations;

    Mat k = ev.hessian(z);
    Vec dz;
    try {
      LuSolver lu(k);
      dz = lu.refined_solve(k, -g);
    } catch (const SingularMatrix&) {
      throw SingularKkt("solve: singular KKT system");
    }

    const double phi0 = g.squaredNorm();
    double alpha = cfg.damping;
    bool accepted = false;
    for (int bt = 0; bt <= cfg.ls_max; ++bt) {
      const Vec gn = ev.gradient(z + alpha * dz);
      if (gn.squaredNorm() < phi0) {
        z += alpha * dz;
        g = gn;
        accepted = true;
        stall += (alpha < cfg.damping) ? 1 : 0;
        if (alpha == cfg.damping) stall = 0;
        break;
      }
      alpha *= cfg.ls_shrink;
    }
    if (!accepted) stall += 5;

    if (stall >= 5) {
      if (!cfg.fallback_enabled)
        throw NoConvergence("solve: Newton stalled and the fallback is disabled");
      res.used_fallback = true;
      if (!gauss_newton_sweep(ev, z, cfg.grad_tol) && !accepted)
        throw NoConvergence("solve: gradient-norm fallback could not make progress");
      g = ev.gradient(z);
      stall = 0;
    }
  }

  res.state.unknowns = std::move(z);
  res.state.value = ev.value(res.state.unknowns);
  res.state.gradient = ev.gradient(res.state.unknowns);
  res.final_grad_norm = res.state.gradient.lpNorm<Eigen::Infinity>();
  return res;
}

// Unregularized doubled-DOF gravity functional (the naive discretization):
// plain D in the kinetic terms, no affine shift, same four constraints as
// the regularized problem.
struct NaiveGravity {
  SbpOperator op;
  double m, g, x0, v0;
  int nt, n;
  Vec hw;
  Mat a;
  std::vector<Vec> crows;

  explicit NaiveGravity(const ActionProblem& p)
      : op(build_sbp(p.grid, p.order)),
        m(p.params.at("m")),
        g(p.params.at("g")),
        x0(p.data.x0),
        v0(*p.data.v0) {
    nt = op.nt();
    n = 2 * nt + 4;
    hw = op.h_diag();
    a.noalias() = op.d.transpose() * (hw.asDiagonal() * op.d);
    crows.assign(4, Vec::Zero(2 * nt));
    crows[0](0) = 1.0;
    crows[1].head(nt) = op.d.row(0).transpose();
    crows[2](nt - 1) = 1.0;
    crows[2](2 * nt - 1) = -1.0;
    crows[3].head(nt) = op.d.row(nt - 1).transpose();
    crows[3].segment(nt, nt) = -op.d.row(nt - 1).transpose();
  }

  Vec constraints(const Vec& z) const {
    Vec c(4);
    c(0) = z(0) - x0;
    c(1) = op.d.row(0).dot(z.head(nt)) - v0;
    c(2) = z(nt - 1) - z(2 * nt - 1);
    c(3) = op.d.row(nt - 1).dot(z.head(nt) - z.segment(nt, nt));
    return c;
  }

  double value(const Vec& z) const {
    const Vec x1 = z.head(nt), x2 = z.segment(nt, nt);
    const Vec y1 = op.d * x1, y2 = op.d * x2;
    double val = 0.5 * m * (y1.dot(hw.cwiseProduct(y1)) - y2.dot(hw.cwiseProduct(y2)));
    val -= m * g * (hw.dot(x1) - hw.dot(x2));
    val += z.tail(4).dot(constraints(z));
    return val;
  }

  Vec gradient(const Vec& z) const {
    Vec grad = Vec::Zero(n);
    const Vec x1 = z.head(nt), x2 = z.segment(nt, nt);
    grad.head(nt) = m * (a * x1) - m * g * hw;
    grad.segment(nt, nt) = -m * (a * x2) + m * g * hw;
    for (int i = 0; i < 4; ++i) grad.head(2 * nt) += z(2 * nt + i) * crows[i];
    grad.tail(4) = constraints(z);
    return grad;
  }

  Mat hessian() const {
    Mat k = Mat::Zero(n, n);
    k.topLeftCorner(nt, nt) = m * a;
    k.block(nt, nt, nt, nt) = -m * a;
    for (int i = 0; i < 4; ++i) {
      k.block(2 * nt + i, 0, 1, 2 * nt) = crows[i].transpose();
      k.block(0, 2 * nt + i, 2 * nt, 1) = crows[i];
    }
    return k;
  }
};

}  // namespace

SolveResult solve(const ActionProblem& p, const SolverConfig& cfg,
                  const std::optional<SolverState>& init) {
  validate(cfg);
  ActionEvaluator ev(p);
  Vec z;
  if (init) {
    if (init->unknowns.size() != ev.unknowns())
      throw LayoutMismatch("solve: initial state layout does not match");
    z = init->unknowns;
  } else {
    z = default_start(p).unknowns;
  }
  return newton_solve(ev, cfg, std::move(z));
}

SolveResult solve_naive(const ActionProblem& p, const SolverConfig& cfg) {
  validate(cfg);
  validate(p);
  if (p.family != Family::IvpGravity)
    throw InvalidArgument("solve_naive: gravity family only");

  const NaiveGravity naive(p);
  Vec z = Vec::Zero(naive.n);
  z.head(2 * naive.nt).setConstant(naive.x0);

  const Vec g = naive.gradient(z);
  const Mat k = naive.hessian();
  Vec dz;
  try {
    LuSolver lu(k);
    dz = lu.refined_solve(k, -g);
  } catch (const SingularMatrix&) {
    throw SingularKkt("solve_naive: singular KKT system (missing regularization)");
  }
  z += dz;

  SolveResult res;
  res.iterations = 1;
  res.state.unknowns = std::move(z);
  res.state.value = naive.value(res.state.unknowns);
  res.state.gradient = naive.gradient(res.state.unknowns);
  res.final_grad_norm = res.state.gradient.lpNorm<Eigen::Infinity>();
  return res;
}

Mat naive_kkt_matrix(const ActionProblem& p) {
  validate(p);
  if (p.family != Family::IvpGravity)
    throw InvalidArgument("naive_kkt_matrix: gravity family only");
  return NaiveGravity(p).hessian();
}

}  // namespace sbpact
