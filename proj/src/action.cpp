#include "sbpaction/action.hpp"

#include <algorithm>
#include <cmath>

namespace sbpact {

const char* to_string(Family family) {
  switch (family) {
    case Family::BvpGravity: return "gravity-bvp";
    case Family::IvpGravity: return "gravity";
    case Family::IvpCubic: return "cubic";
    case Family::IvpExponential: return "exponential";
    case Family::IvpDampedHo: return "damped-ho";
  }
  return "?";
}

namespace {

const std::map<Family, std::vector<std::string>>& required_params() {
  static const std::map<Family, std::vector<std::string>> req = {
      {Family::BvpGravity, {"m", "g"}},
      {Family::IvpGravity, {"m", "g"}},
      {Family::IvpCubic, {"kappa"}},
      {Family::IvpExponential, {"kappa"}},
      {Family::IvpDampedHo, {"mu", "kappa", "xi"}}};
  return req;
}

bool second_order(Family family) {
  return family == Family::IvpGravity || family == Family::IvpCubic ||
         family == Family::IvpDampedHo;
}

}  // namespace

void validate(const ActionProblem& p) {
  const auto& req = required_params().at(p.family);
  for (const auto& key : req)
    if (!p.params.count(key))
      throw InvalidArgument(std::string("problem ") + to_string(p.family) +
                            ": missing parameter " + key);
  for (const auto& [key, value] : p.params) {
    if (std::find(req.begin(), req.end(), key) == req.end())
      throw InvalidArgument(std::string("problem ") + to_string(p.family) +
                            ": unknown parameter " + key);
    if (!std::isfinite(value))
      throw InvalidArgument("parameter " + key + " is not finite");
  }
  if (!std::isfinite(p.data.x0)) throw InvalidArgument("x0 must be finite");
  if (second_order(p.family) && !p.data.v0)
    throw InvalidArgument(std::string("problem ") + to_string(p.family) +
                          ": second-order family needs v0");
  if (p.family == Family::BvpGravity && !p.bvp_end)
    throw InvalidArgument("gravity-bvp needs the final position x_f");
}

int path_count(Family family) { return family == Family::BvpGravity ? 1 : 2; }

int constraint_count(Family family) {
  switch (family) {
    case Family::BvpGravity: return 2;
    case Family::IvpExponential: return 2;
    default: return 4;
  }
}

int unknown_count(const ActionProblem& p) {
  return path_count(p.family) * p.grid.nt + constraint_count(p.family);
}

SolverState make_state(const ActionProblem& p) {
  SolverState s;
  s.unknowns = Vec::Zero(unknown_count(p));
  return s;
}

SolverState default_start(const ActionProblem& p) {
  SolverState s = make_state(p);
  const int nt = p.grid.nt;
  for (int path = 0; path < path_count(p.family); ++path)
    s.unknowns.segment(path * nt, nt).setConstant(p.data.x0);
  return s;
}

ActionEvaluator::ActionEvaluator(const ActionProblem& p)
    : p_(p), op_(build_sbp(p.grid, p.order)) {
  validate(p_);
  nt_ = op_.nt();
  paths_ = path_count(p_.family);
  nc_ = constraint_count(p_.family);
  n_ = paths_ * nt_ + nc_;
  hw_ = op_.h_diag();

  const bool kinetic = p_.family == Family::IvpGravity || p_.family == Family::IvpCubic ||
                       p_.family == Family::IvpDampedHo;
  const bool lambda_term =
      p_.family == Family::IvpExponential || p_.family == Family::IvpDampedHo;

  if (paths_ == 2) {
    const AffineOperator aop = build_affine(op_, p_.data);
    dtil_ = aop.path_block();
    b_ = aop.shift;
  }
  if (kinetic) {
    a_.noalias() = dtil_.transpose() * (hw_.asDiagonal() * dtil_);
    ab_.noalias() = dtil_.transpose() * hw_.cwiseProduct(b_);
  }
  if (p_.family == Family::BvpGravity)
    a_plain_.noalias() = op_.d.transpose() * (hw_.asDiagonal() * op_.d);
  if (lambda_term) {
    const Mat hd = hw_.asDiagonal() * dtil_;
    const Mat dth = dtil_.transpose() * Mat(hw_.asDiagonal());
    sym_ = 0.5 * (dth + hd);
    asym_ = 0.5 * (hd - dth);
  }

  // constraint rows over the path coordinates, one per multiplier
  const int np = paths_ * nt_;
  auto unit = [&](int i) {
    Vec r = Vec::Zero(np);
    r(i) = 1.0;
    return r;
  };
  crows_.clear();
  if (p_.family == Family::BvpGravity) {
    crows_.push_back(unit(0));
    crows_.push_back(unit(nt_ - 1));
  } else {
    crows_.push_back(unit(0));  // x1(0)
    if (nc_ == 4) {
      Vec r = Vec::Zero(np);
      r.head(nt_) = op_.d.row(0).transpose();  // (D x1)(0)
      crows_.push_back(r);
    }
    Vec r3 = Vec::Zero(np);
    r3(nt_ - 1) = 1.0;
    r3(2 * nt_ - 1) = -1.0;  // x1(N) - x2(N)
    crows_.push_back(r3);
    if (nc_ == 4) {
      Vec r4 = Vec::Zero(np);
      r4.head(nt_) = op_.d.row(nt_ - 1).transpose();
      r4.segment(nt_, nt_) = -op_.d.row(nt_ - 1).transpose();
      crows_.push_back(r4);
    }
  }
}

void ActionEvaluator::check(const Vec& z) const {
  if (z.size() != n_)
    throw LayoutMismatch("state layout does not match the problem");
}

Vec ActionEvaluator::constraints(const Vec& z) const {
  check(z);
  Vec c(nc_);
  const double xi = p_.data.x0;
  if (p_.family == Family::BvpGravity) {
    const Vec x = z.head(nt_);
    c(0) = x(0) - xi;
    c(1) = x(nt_ - 1) - *p_.bvp_end;
    return c;
  }
  const Vec x1 = path1(z), x2 = path2(z);
  int i = 0;
  c(i++) = x1(0) - xi;
  if (nc_ == 4) c(i++) = op_.d.row(0).dot(x1) - *p_.data.v0;
  c(i++) = x1(nt_ - 1) - x2(nt_ - 1);
  if (nc_ == 4) c(i++) = op_.d.row(nt_ - 1).dot(x1 - x2);
  return c;
}

double ActionEvaluator::value(const Vec& z) const {
  check(z);
  const Vec lam = multipliers(z);
  const Vec c = constraints(z);
  double val = lam.dot(c);

  auto hdot = [&](const Vec& u, const Vec& v) { return u.dot(hw_.cwiseProduct(v)); };

  switch (p_.family) {
    case Family::BvpGravity: {
      const Vec x = z.head(nt_);
      const Vec dx = op_.d * x;
      const double m = p_.params.at("m"), g = p_.params.at("g");
      val += 0.5 * m * hdot(dx, dx) - m * g * hw_.dot(x);
      break;
    }
    case Family::IvpGravity: {
      const Vec x1 = path1(z), x2 = path2(z);
      const Vec y1 = dtil_ * x1 + b_, y2 = dtil_ * x2 + b_;
      const double m = p_.params.at("m"), g = p_.params.at("g");
      val += 0.5 * m * (hdot(y1, y1) - hdot(y2, y2));
      val += -m * g * (hw_.dot(x1) - hw_.dot(x2));
      break;
    }
    case Family::IvpCubic: {
      const Vec x1 = path1(z), x2 = path2(z);
      const Vec y1 = dtil_ * x1 + b_, y2 = dtil_ * x2 + b_;
      const double kappa = p_.params.at("kappa");
      val += 0.5 * (hdot(y1, y1) - hdot(y2, y2));
      const Vec u = 0.5 * (x1 + x2);
      const Vec v = x1 - x2;
      val += -kappa * (hw_.array() * u.array().cube() * v.array()).sum();
      break;
    }
    case Family::IvpExponential: {
      const Vec x1 = path1(z), x2 = path2(z);
      const double kappa = p_.params.at("kappa");
      val += -0.5 * kappa * (hdot(x1, x1) - hdot(x2, x2));
      const Vec w = dtil_ * (x1 + x2) + 2.0 * b_;
      val += 0.5 * hdot(w, x1 - x2);
      break;
    }
    case Family::IvpDampedHo: {
      const Vec x1 = path1(z), x2 = path2(z);
      const Vec y1 = dtil_ * x1 + b_, y2 = dtil_ * x2 + b_;
      const double mu = p_.params.at("mu");
      const double kappa = p_.params.at("kappa");
      const double xi = p_.params.at("xi");
      val += 0.5 * mu * (hdot(y1, y1) - hdot(y2, y2));
      val += -0.5 * kappa * (hdot(x1, x1) - hdot(x2, x2));
      const Vec w = dtil_ * (x1 + x2) + 2.0 * b_;
      val += -0.5 * xi * hdot(w, x1 - x2);
      break;
    }
  }
  return val;
}

Vec ActionEvaluator::gradient(const Vec& z) const {
  check(z);
  const Vec lam = multipliers(z);
  const int np = paths_ * nt_;
  Vec g = Vec::Zero(n_);

  switch (p_.family) {
    case Family::BvpGravity: {
      const Vec x = z.head(nt_);
      const double m = p_.params.at("m"), grav = p_.params.at("g");
      g.head(nt_) = m * op_.d.transpose() * hw_.cwiseProduct(op_.d * x) - m * grav * hw_;
      break;
    }
    case Family::IvpGravity: {
      const Vec x1 = path1(z), x2 = path2(z);
      const double m = p_.params.at("m"), grav = p_.params.at("g");
      g.head(nt_) = m * (dtil_.transpose() * hw_.cwiseProduct(dtil_ * x1 + b_)) - m * grav * hw_;
      g.segment(nt_, nt_) =
          -m * (dtil_.transpose() * hw_.cwiseProduct(dtil_ * x2 + b_)) + m * grav * hw_;
      break;
    }
    case Family::IvpCubic: {
      const Vec x1 = path1(z), x2 = path2(z);
      const double kappa = p_.params.at("kappa");
      const Vec u = 0.5 * (x1 + x2);
      const Vec v = x1 - x2;
      const Vec u2 = u.array().square();
      const Vec u3 = u2.array() * u.array();
      g.head(nt_) = dtil_.transpose() * hw_.cwiseProduct(dtil_ * x1 + b_) -
                    kappa * (hw_.array() * (1.5 * u2.array() * v.array() + u3.array())).matrix();
      g.segment(nt_, nt_) =
          -(dtil_.transpose() * hw_.cwiseProduct(dtil_ * x2 + b_)) -
          kappa * (hw_.array() * (1.5 * u2.array() * v.array() - u3.array())).matrix();
      break;
    }
    case Family::IvpExponential: {
      const Vec x1 = path1(z), x2 = path2(z);
      const double kappa = p_.params.at("kappa");
      const Vec w = dtil_ * (x1 + x2) + 2.0 * b_;
      const Vec hv = hw_.cwiseProduct(x1 - x2);
      const Vec hwv = hw_.cwiseProduct(w);
      g.head(nt_) = -kappa * hw_.cwiseProduct(x1) + 0.5 * (dtil_.transpose() * hv + hwv);
      g.segment(nt_, nt_) =
          kappa * hw_.cwiseProduct(x2) + 0.5 * (dtil_.transpose() * hv - hwv);
      break;
    }
    case Family::IvpDampedHo: {
      const Vec x1 = path1(z), x2 = path2(z);
      const double mu = p_.params.at("mu");
      const double kappa = p_.params.at("kappa");
      const double xi = p_.params.at("xi");
      const Vec w = dtil_ * (x1 + x2) + 2.0 * b_;
      const Vec hv = hw_.cwiseProduct(x1 - x2);
      const Vec hwv = hw_.cwiseProduct(w);
      g.head(nt_) = mu * (dtil_.transpose() * hw_.cwiseProduct(dtil_ * x1 + b_)) -
                    kappa * hw_.cwiseProduct(x1) - 0.5 * xi * (dtil_.transpose() * hv + hwv);
      g.segment(nt_, nt_) = -mu * (dtil_.transpose() * hw_.cwiseProduct(dtil_ * x2 + b_)) +
                            kappa * hw_.cwiseProduct(x2) -
                            0.5 * xi * (dtil_.transpose() * hv - hwv);
      break;
    }
  }

  for (int i = 0; i < nc_; ++i) g.head(np) += lam(i) * crows_[i];
  g.tail(nc_) = constraints(z);
  return g;
}

Mat ActionEvaluator::hessian(const Vec& z) const {
  check(z);
  const int np = paths_ * nt_;
  Mat k = Mat::Zero(n_, n_);

  switch (p_.family) {
    case Family::BvpGravity: {
      const double m = p_.params.at("m");
      k.topLeftCorner(nt_, nt_) = m * a_plain_;
      break;
    }
    case Family::IvpGravity: {
      const double m = p_.params.at("m");
      k.topLeftCorner(nt_, nt_) = m * a_;
      k.block(nt_, nt_, nt_, nt_) = -m * a_;
      break;
    }
    case Family::IvpCubic: {
      const Vec x1 = path1(z), x2 = path2(z);
      const double kappa = p_.params.at("kappa");
      const Vec u = 0.5 * (x1 + x2);
      const Vec v = x1 - x2;
      const Vec uv = u.array() * v.array();
      const Vec u2 = u.array().square();
      const Vec d11 = (kappa * hw_.array() * (1.5 * uv.array() + 3.0 * u2.array())).matrix();
      const Vec d12 = (kappa * hw_.array() * 1.5 * uv.array()).matrix();
      const Vec d22 = (kappa * hw_.array() * (1.5 * uv.array() - 3.0 * u2.array())).matrix();
      k.topLeftCorner(nt_, nt_) = a_;
      k.topLeftCorner(nt_, nt_) -= Mat(d11.asDiagonal());
      k.block(0, nt_, nt_, nt_) = -Mat(d12.asDiagonal());
      k.block(nt_, 0, nt_, nt_) = -Mat(d12.asDiagonal());
      k.block(nt_, nt_, nt_, nt_) = -a_;
      k.block(nt_, nt_, nt_, nt_) -= Mat(d22.asDiagonal());
      break;
    }
    case Family::IvpExponential: {
      const double kappa = p_.params.at("kappa");
      const Mat hmat = Mat(hw_.asDiagonal());
      k.topLeftCorner(nt_, nt_) = -kappa * hmat + sym_;
      k.block(0, nt_, nt_, nt_) = asym_;
      k.block(nt_, 0, nt_, nt_) = asym_.transpose();
      k.block(nt_, nt_, nt_, nt_) = kappa * hmat - sym_;
      break;
    }
    case Family::IvpDampedHo: {
      const double mu = p_.params.at("mu");
      const double kappa = p_.params.at("kappa");
      const double xi = p_.params.at("xi");
      const Mat hmat = Mat(hw_.asDiagonal());
      k.topLeftCorner(nt_, nt_) = mu * a_ - kappa * hmat - xi * sym_;
      k.block(0, nt_, nt_, nt_) = -xi * asym_;
      k.block(nt_, 0, nt_, nt_) = -xi * asym_.transpose();
      k.block(nt_, nt_, nt_, nt_) = -mu * a_ + kappa * hmat + xi * sym_;
      break;
    }
  }

  for (int i = 0; i < nc_; ++i) {
    k.block(np + i, 0, 1, np) = crows_[i].transpose();
    k.block(0, np + i, np, 1) = crows_[i];
  }
  return k;
}

double action_value(const ActionProblem& p, const SolverState& s) {
  return ActionEvaluator(p).value(s.unknowns);
}

Vec action_gradient(const ActionProblem& p, const SolverState& s) {
  return ActionEvaluator(p).gradient(s.unknowns);
}

Mat action_hessian(const ActionProblem& p, const SolverState& s) {
  return ActionEvaluator(p).hessian(s.unknowns);
}

Vec discrete_eom_residual(const ActionProblem& p, const SolverState& s) {
  if (p.family != Family::BvpGravity && p.family != Family::IvpGravity)
    throw InvalidArgument("discrete_eom_residual: gravity families only");
  if (s.unknowns.size() != unknown_count(p))
    throw LayoutMismatch("state layout does not match the problem");
  const SbpOperator op = build_sbp(p.grid, p.order);
  const int nt = op.nt();
  Vec xplus = (p.family == Family::BvpGravity)
                  ? Vec(s.unknowns.head(nt))
                  : Vec(0.5 * (s.unknowns.head(nt) + s.unknowns.segment(nt, nt)));
  return op.d * (op.d * xplus) + p.params.at("g") * Vec::Ones(nt);
}

}  // namespace sbpact
