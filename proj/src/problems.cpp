#include "sbpaction/problems.hpp"

#include <cmath>
#include <memory>

namespace sbpact {

namespace {

double param(const std::map<std::string, double>& params, const char* name) {
  auto it = params.find(name);
  if (it == params.end())
    throw InvalidArgument(std::string("missing parameter ") + name);
  return it->second;
}

// (x, v) -> (dx/dt, dv/dt); the exponential family carries its derivative
// in x alone and ignores v.
using Rhs = std::function<void(double x, double v, double& dx, double& dv)>;

Rhs governing_ode(Family family, const std::map<std::string, double>& params) {
  switch (family) {
    case Family::BvpGravity:
    case Family::IvpGravity: {
      const double g = param(params, "g");
      return [g](double, double v, double& dx, double& dv) {
        dx = v;
        dv = -g;
      };
    }
    case Family::IvpCubic: {
      const double kappa = param(params, "kappa");
      return [kappa](double x, double v, double& dx, double& dv) {
        dx = v;
        dv = -kappa * x * x * x;
      };
    }
    case Family::IvpExponential: {
      const double kappa = param(params, "kappa");
      return [kappa](double x, double, double& dx, double& dv) {
        dx = kappa * x;
        dv = 0.0;
      };
    }
    case Family::IvpDampedHo: {
      const double mu = param(params, "mu");
      const double kappa = param(params, "kappa");
      const double xi = param(params, "xi");
      return [mu, kappa, xi](double x, double v, double& dx, double& dv) {
        dx = v;
        dv = -(xi * v + kappa * x) / mu;
      };
    }
  }
  throw InvalidArgument("unknown family");
}

struct Rk4State {
  double t = 0.0, x = 0.0, v = 0.0;
};

void rk4_advance(const Rhs& f, Rk4State& s, double t_target, double fine_dt) {
  const double span = t_target - s.t;
  if (span <= 0.0) return;
  const long nsteps = std::max(1L, static_cast<long>(std::ceil(span / fine_dt)));
  const double h = span / static_cast<double>(nsteps);
  double x = s.x, v = s.v;
  for (long i = 0; i < nsteps; ++i) {
    double k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    f(x, v, k1x, k1v);
    f(x + 0.5 * h * k1x, v + 0.5 * h * k1v, k2x, k2v);
    f(x + 0.5 * h * k2x, v + 0.5 * h * k2v, k3x, k3v);
    f(x + h * k3x, v + h * k3v, k4x, k4v);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  s.t = t_target;
  s.x = x;
  s.v = v;
}

std::pair<double, double> observe(Family family,
                                  const std::map<std::string, double>& params,
                                  const Rk4State& s) {
  if (family == Family::IvpExponential)
    return {s.x, param(params, "kappa") * s.x};
  return {s.x, s.v};
}

}  // namespace

std::pair<double, double> rk_oracle(Family family,
                                    const std::map<std::string, double>& params,
                                    const InitialData& data, double t_eval,
                                    double fine_dt) {
  if (!(t_eval >= 0.0)) throw InvalidArgument("rk_oracle: t_eval must be >= 0");
  Rk4State s{0.0, data.x0, data.v0.value_or(0.0)};
  if (t_eval == 0.0) {
    if (family == Family::IvpExponential) return observe(family, params, s);
    return {s.x, s.v};
  }
  if (!(fine_dt > 0.0) || fine_dt > 1e-4 * t_eval)
    throw InvalidArgument("rk_oracle: need 0 < fine_dt <= 1e-4 * t_eval");
  const Rhs f = governing_ode(family, params);
  rk4_advance(f, s, t_eval, fine_dt);
  return observe(family, params, s);
}

ReferenceSolution reference(Family family, const std::map<std::string, double>& params,
                            const InitialData& data) {
  const double x0 = data.x0;
  switch (family) {
    case Family::BvpGravity:
    case Family::IvpGravity: {
      const double g = param(params, "g");
      const double v0 = data.v0.value_or(0.0);
      return {ReferenceKind::Closed, [g, x0, v0](double t) {
                return std::make_pair(-0.5 * g * t * t + v0 * t + x0, -g * t + v0);
              }};
    }
    case Family::IvpExponential: {
      const double kappa = param(params, "kappa");
      return {ReferenceKind::Closed, [kappa, x0](double t) {
                const double x = x0 * std::exp(kappa * t);
                return std::make_pair(x, kappa * x);
              }};
    }
    case Family::IvpDampedHo: {
      const double mu = param(params, "mu");
      const double kappa = param(params, "kappa");
      const double xi = param(params, "xi");
      if (xi * xi >= 4.0 * mu * kappa)
        throw OverdampedUnsupported("reference: xi^2 >= 4 mu kappa");
      const double gamma = xi / (2.0 * mu);
      const double omega = std::sqrt(kappa / mu - gamma * gamma);
      const double a = x0;
      const double b = (data.v0.value_or(0.0) + gamma * x0) / omega;
      return {ReferenceKind::Closed, [gamma, omega, a, b](double t) {
                const double decay = std::exp(-gamma * t);
                const double c = std::cos(omega * t), s = std::sin(omega * t);
                const double x = decay * (a * c + b * s);
                const double v = decay * ((b * omega - gamma * a) * c -
                                          (a * omega + gamma * b) * s);
                return std::make_pair(x, v);
              }};
    }
    case Family::IvpCubic: {
      // No elementary closed form; integrate incrementally and cache the
      // last state so that ascending sample times cost one sweep total.
      const double fine_dt = 1e-5;
      auto cache = std::make_shared<Rk4State>();
      cache->x = x0;
      cache->v = data.v0.value_or(0.0);
      const Rhs f = governing_ode(family, params);
      return {ReferenceKind::Oracle, [f, cache, fine_dt, x0, v0 = cache->v](double t) {
                if (t < cache->t) *cache = Rk4State{0.0, x0, v0};
                rk4_advance(f, *cache, t, fine_dt);
                return std::make_pair(cache->x, cache->v);
              }};
    }
  }
  throw InvalidArgument("unknown family");
}

EnergyTrace energy_trace(const ActionProblem& p, const SolverState& s) {
  validate(p);
  if (s.unknowns.size() != unknown_count(p))
    throw LayoutMismatch("energy_trace: state layout does not match");

  const SbpOperator op = build_sbp(p.grid, p.order);
  const int nt = op.nt();
  const Vec x1 = s.unknowns.head(nt);
  const Vec x2 = (path_count(p.family) == 2) ? Vec(s.unknowns.segment(nt, nt)) : x1;
  const Vec v1 = op.d * x1;
  const Vec v2 = op.d * x2;

  double kcoef = 0.0;
  std::function<double(double)> potential;
  switch (p.family) {
    case Family::BvpGravity:
    case Family::IvpGravity: {
      const double m = p.params.at("m"), g = p.params.at("g");
      kcoef = m;
      potential = [m, g](double x) { return m * g * x; };
      break;
    }
    case Family::IvpCubic: {
      const double kappa = p.params.at("kappa");
      kcoef = 1.0;
      potential = [kappa](double x) { return 0.25 * kappa * x * x * x * x; };
      break;
    }
    case Family::IvpExponential: {
      const double kappa = p.params.at("kappa");
      kcoef = 0.0;
      potential = [kappa](double x) { return 0.5 * kappa * x * x; };
      break;
    }
    case Family::IvpDampedHo: {
      // H = T + V = 0.5 mu xdot^2 + kappa x^2 (the unhalved quadratic
      // coefficient is deliberate).
      const double mu = p.params.at("mu"), kappa = p.params.at("kappa");
      kcoef = mu;
      potential = [kappa](double x) { return kappa * x * x; };
      break;
    }
  }

  EnergyTrace tr;
  tr.times = p.grid.nodes();
  tr.energy.resize(nt);
  tr.noether_sum.resize(nt);
  tr.noether_diff.resize(nt);
  for (int k = 0; k < nt; ++k) {
    const double hplus = 0.5 * kcoef * v1(k) * v1(k) + potential(x1(k));
    const double hminus = 0.5 * kcoef * v2(k) * v2(k) + potential(x2(k));
    tr.energy(k) = hplus;
    tr.noether_sum(k) = hplus + hminus;
    tr.noether_diff(k) = hplus - hminus;
  }
  return tr;
}

const std::vector<ProblemSpec>& problem_registry() {
  static const std::vector<ProblemSpec> registry = {
      {"gravity-bvp", Family::BvpGravity, {{"m", 1.0}, {"g", 1.0}},
       InitialData{1.0, std::nullopt}, 0.8},
      {"gravity", Family::IvpGravity, {{"m", 1.0}, {"g", 1.0}},
       InitialData{1.0, 0.3}, std::nullopt},
      {"cubic", Family::IvpCubic, {{"kappa", 20.0}}, InitialData{1.0, 0.3},
       std::nullopt},
      {"exponential", Family::IvpExponential, {{"kappa", 2.5}},
       InitialData{1.0, std::nullopt}, std::nullopt},
      {"damped-ho", Family::IvpDampedHo,
       {{"mu", 0.5}, {"kappa", 1.0}, {"xi", 0.00071}}, InitialData{1.0, 0.0},
       std::nullopt}};
  return registry;
}

const ProblemSpec* find_problem(const std::string& name) {
  for (const auto& spec : problem_registry())
    if (spec.name == name) return &spec;
  return nullptr;
}

}  // namespace sbpact
