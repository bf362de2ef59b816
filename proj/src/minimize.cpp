#include "gridnls/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gridnls/functionals.hpp"
#include "gridnls/norms.hpp"
#include "gridnls/testfuncs.hpp"
#include "operators.hpp"

namespace gridnls {
namespace {

using detail::Operators;
using detail::ShiftedSolver;
using detail::Vec;

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

std::span<const double> view(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Vec to_vec(const GraphFunction& u) {
  const auto s = u.values();
  return Eigen::Map<const Vec>(s.data(), static_cast<Eigen::Index>(s.size()));
}

GraphFunction to_function(const GridPtr& graph, const Vec& v) {
  return GraphFunction(graph, std::vector<double>(v.data(), v.data() + v.size()));
}

// E(u) = u^T K u / 2 - \int |u|^p / p on raw DOF vectors.
struct EnergyModel {
  const GridGraph& g;
  const Operators& ops;
  double p;

  double kinetic(const Vec& u) const { return u.dot(ops.stiffness * u); }
  double mass(const Vec& u) const { return u.dot(ops.mass * u); }
  double energy(const Vec& u) const { return 0.5 * kinetic(u) - kernels::lp_power(g, view(u), p) / p; }

  Vec gradient(const Vec& u) const {
    Vec grad = ops.stiffness * u;
    Vec pot = Vec::Zero(u.size());
    kernels::lp_power_gradient(g, view(u), p, {pot.data(), static_cast<std::size_t>(pot.size())});
    grad -= pot / p;
    return grad;
  }
};

void normalize(Vec& u, const Operators& ops, double mu) { u *= std::sqrt(mu / u.dot(ops.mass * u)); }

GraphFunction initial_state(const GridPtr& graph, const InitSpec& init, double mu) {
  switch (init.kind) {
    case InitKind::ExpFamily:
      return u_eps(graph, make_exp_family(init.eps, mu), 2.0);
    case InitKind::EdgeSoliton:
      return compact_edge_soliton(graph, init.soliton_scale);
    case InitKind::Provided: {
      if (!init.provided) throw std::invalid_argument("minimize: Provided init without a function");
      const auto& f = *init.provided;
      if (f.graph().half_width() != graph->half_width() || f.graph().mesh() != graph->mesh()) {
        throw std::invalid_argument("minimize: provided function lives on a different grid");
      }
      return GraphFunction(graph, std::vector<double>(f.values().begin(), f.values().end()));
    }
  }
  throw std::invalid_argument("minimize: unknown init kind");
}

void perturb(GraphFunction& u, double amplitude, std::uint64_t seed) {
  if (amplitude <= 0.0) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  const double scale = amplitude * norm_linf(u);
  for (auto& v : u.values()) v += scale * noise(rng);
}

}  // namespace

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::ExpFamily: return "exp";
    case InitKind::EdgeSoliton: return "edge-soliton";
    case InitKind::Provided: return "provided";
  }
  return "unknown";
}

std::optional<InitKind> init_kind_from_string(std::string_view name) {
  if (name == "exp") return InitKind::ExpFamily;
  if (name == "edge-soliton") return InitKind::EdgeSoliton;
  if (name == "provided") return InitKind::Provided;
  return std::nullopt;
}

std::string_view to_string(MinimizeStatus s) {
  switch (s) {
    case MinimizeStatus::Converged: return "Converged";
    case MinimizeStatus::NonNegativeInfimum: return "NonNegativeInfimum";
    case MinimizeStatus::ConcentrationDetected: return "ConcentrationDetected";
    case MinimizeStatus::MaxItersReached: return "MaxItersReached";
  }
  return "unknown";
}

std::string_view to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::QuotientAscent: return "QuotientAscent";
    case EstimateMethod::EnergyBisection: return "EnergyBisection";
    case EstimateMethod::Formula: return "Formula";
  }
  return "unknown";
}

void validate(const MinimizeConfig& cfg) {
  if (!(cfg.p > 2.0)) throw std::invalid_argument("minimize: p must exceed 2");
  if (cfg.p > 6.0) {
    throw std::invalid_argument("minimize: p > 6 rejected, the constrained energy is unbounded below by a scaling argument");
  }
  if (!(cfg.mu > 0.0) || !std::isfinite(cfg.mu)) throw std::invalid_argument("minimize: mu must be positive");
  if (cfg.max_iters < 0) throw std::invalid_argument("minimize: max_iters must be >= 0");
  if (!(cfg.grad_tol > 0.0)) throw std::invalid_argument("minimize: grad_tol must be positive");
  if (!(cfg.step0 > 0.0) || !(cfg.step_max >= cfg.step0)) throw std::invalid_argument("minimize: need 0 < step0 <= step_max");
  if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0)) throw std::invalid_argument("minimize: backtrack factor must lie in (0,1)");
  if (!(cfg.concentration_threshold > 0.0 && cfg.concentration_threshold < 1.0)) {
    throw std::invalid_argument("minimize: concentration_threshold must lie in (0,1)");
  }
  if (cfg.perturbation < 0.0) throw std::invalid_argument("minimize: perturbation must be >= 0");
}

MinimizeResult minimize_energy(const GridPtr& graph, const MinimizeConfig& cfg) {
  validate(cfg);
  const auto ops = detail::assemble_operators(*graph);
  const EnergyModel model{*graph, ops, cfg.p};
  ShiftedSolver solver(ops);

  auto start = initial_state(graph, cfg.init, cfg.mu);
  perturb(start, cfg.perturbation, cfg.seed);
  if (start.is_zero()) throw std::invalid_argument("minimize: initial state vanishes on this grid");
  Vec u = to_vec(start);
  normalize(u, ops, cfg.mu);
  double e = model.energy(u);

  MinimizeResult res{.state = to_function(graph, u), .energy_history = {}};
  res.energy_history.push_back(e);
  res.open_regime = cfg.p == 4.0;

  double tau = cfg.step0;
  bool stationary = false;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const Vec g = model.gradient(u);
    const Vec mu_vec = ops.mass * u;
    const double lambda = u.dot(g) / u.dot(mu_vec);
    res.multiplier = lambda;
    // Shift towards -lambda so K + sigma M mimics the Hessian of the Lagrangian.
    const double rayleigh = model.kinetic(u) / cfg.mu;
    solver.update(std::max(-lambda, 0.05 * rayleigh));

    const Vec z_g = solver.solve(g);
    const Vec z_m = solver.solve(mu_vec);
    const Vec d = z_g - (mu_vec.dot(z_g) / mu_vec.dot(z_m)) * z_m;
    const double slope = g.dot(d);
    res.grad_norm = std::sqrt(std::max(slope, 0.0));
    if (res.grad_norm < cfg.grad_tol) {
      stationary = true;
      break;
    }

    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      Vec trial = u - tau * d;
      normalize(trial, ops, cfg.mu);
      const double et = model.energy(trial);
      if (et <= e - kArmijo * tau * slope) {
        u = std::move(trial);
        e = et;
        accepted = true;
        break;
      }
      tau *= cfg.backtrack;
    }
    if (!accepted) break;  // no decrease resolvable in floating point
    res.energy_history.push_back(e);
    tau = std::min(2.0 * tau, cfg.step_max);
  }

  res.iterations = it;
  res.state = to_function(graph, u);
  res.energy = e;
  res.concentration = max_cell_mass_fraction(res.state);
  if (res.concentration > cfg.concentration_threshold) {
    res.status = MinimizeStatus::ConcentrationDetected;
  } else if (stationary) {
    res.status = e >= -cfg.grad_tol ? MinimizeStatus::NonNegativeInfimum : MinimizeStatus::Converged;
  } else {
    res.status = MinimizeStatus::MaxItersReached;
  }
  return res;
}

namespace {

// Ascent of f(u) = log Q_p(u) = log P - ((p-2)/2) log N - log T.
struct AscentOutcome {
  Vec state;
  double quotient{0.0};
  int iterations{0};
};

AscentOutcome ascend_quotient(const GridGraph& g, const Operators& ops, double p, Vec u, const QuotientConfig& cfg) {
  ShiftedSolver solver(ops);
  auto log_q = [&](const Vec& v, double& T, double& N, double& P) {
    T = v.dot(ops.stiffness * v);
    N = v.dot(ops.mass * v);
    P = kernels::lp_power(g, view(v), p);
    return std::log(P) - 0.5 * (p - 2.0) * std::log(N) - std::log(T);
  };
  normalize(u, ops, 1.0);
  double T = 0.0, N = 0.0, P = 0.0;
  double f = log_q(u, T, N, P);
  double tau = cfg.step0;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    Vec grad_p = Vec::Zero(u.size());
    kernels::lp_power_gradient(g, view(u), p, {grad_p.data(), static_cast<std::size_t>(grad_p.size())});
    const Vec ku = ops.stiffness * u;
    const Vec mu_vec = ops.mass * u;
    const Vec grad = grad_p / P - (p - 2.0) * mu_vec / N - 2.0 * ku / T;
    solver.update(std::max(0.5 * (p - 2.0) * T / N, 1e-8));
    const Vec d = (0.5 * T) * solver.solve(grad);
    const double slope = grad.dot(d);
    if (std::sqrt(std::max(slope, 0.0)) < cfg.grad_tol) break;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      Vec trial = u + tau * d;
      double Tt = 0.0, Nt = 0.0, Pt = 0.0;
      if (trial.squaredNorm() > 0.0) {
        const double ft = log_q(trial, Tt, Nt, Pt);
        if (std::isfinite(ft) && ft >= f + kArmijo * tau * slope) {
          normalize(trial, ops, 1.0);
          u = std::move(trial);
          f = log_q(u, T, N, P);
          accepted = true;
          break;
        }
      }
      tau *= cfg.backtrack;
    }
    if (!accepted) break;
    tau = std::min(2.0 * tau, 1.0);
  }
  return {u, std::exp(f), it};
}

}  // namespace

ConstantEstimate maximize_quotient(const GridPtr& graph, double p, const QuotientConfig& cfg) {
  if (!(p >= 4.0 && p <= 6.0)) throw std::invalid_argument("maximize_quotient: p must lie in [4, 6]");
  const auto ops = detail::assemble_operators(*graph);

  std::vector<GraphFunction> starts;
  for (double eps : cfg.start_eps) starts.push_back(u_eps(graph, make_exp_family(eps, 1.0), 2.0));
  if (cfg.edge_soliton_start && graph->mesh() >= 2) starts.push_back(compact_edge_soliton(graph, cfg.soliton_scale));
  for (const auto& s : cfg.extra_starts) {
    if (s.graph().half_width() != graph->half_width() || s.graph().mesh() != graph->mesh()) {
      throw std::invalid_argument("maximize_quotient: extra start lives on a different grid");
    }
    starts.emplace_back(graph, std::vector<double>(s.values().begin(), s.values().end()));
  }
  if (starts.empty()) throw std::invalid_argument("maximize_quotient: no starting states");

  ConstantEstimate est;
  est.p = p;
  est.method = EstimateMethod::QuotientAscent;
  Vec best;
  auto consider = [&](const GraphFunction& s) {
    if (s.is_zero()) return;
    auto out = ascend_quotient(*graph, ops, p, to_vec(s), cfg);
    est.iterations += out.iterations;
    if (out.quotient > est.value) {
      est.value = out.quotient;
      best = std::move(out.state);
    }
  };
  for (const auto& s : starts) consider(s);

  // Random certification: nothing sampled may beat the ascent; if something
  // does, it becomes a start and the ascent is rerun from it.
  std::mt19937_64 rng(cfg.seed);
  std::optional<GraphFunction> best_sample;
  for (int i = 0; i < cfg.certification_samples; ++i) {
    auto s = random_function(graph, rng);
    if (s.is_zero()) continue;
    const double q = quotient_unchecked(s, p);
    ++est.certified_samples;
    if (q > est.best_sample_quotient) {
      est.best_sample_quotient = q;
      best_sample = std::move(s);
    }
  }
  if (best_sample && est.best_sample_quotient > est.value) consider(*best_sample);

  est.lo = est.value;
  est.hi = est.value * (1.0 + cfg.safety);
  auto state = to_function(graph, best);
  est.best_state = state;

  const double mu_p = critical_mass_from_constant(p, est.value);
  const double k4 = cfg.k4_hint.value_or(std::pow(1.5, 4.0));
  auto at_mu = std::sqrt(mu_p) * state;  // unit-mass state rescaled to mass mu_p
  const double d2 = std::sqrt(kinetic(at_mu));
  est.compactness_bound = std::pow(mu_p, (6.0 - p) / 4.0) / std::pow(d2, (6.0 - p) / 2.0);
  est.nondegeneracy_bound = std::pow(norm_linf(at_mu), p - 4.0) * k4 / std::pow(mu_p, (p - 4.0) / 2.0);
  return est;
}

ConstantEstimate estimate_critical_mass(const GridPtr& graph, double p, EstimateMethod method,
                                        const CriticalMassConfig& cfg) {
  if (p < 4.0) {
    throw std::invalid_argument("estimate_critical_mass: no critical mass for p < 4, ground states exist for every mass");
  }
  ConstantEstimate est;
  est.p = p;
  est.method = method;

  if (method == EstimateMethod::Formula || method == EstimateMethod::QuotientAscent) {
    if (p > 6.0) throw std::invalid_argument("estimate_critical_mass: Formula needs p in [4, 6]");
    est.method = EstimateMethod::Formula;
    double k_lo = 0.0, k_hi = 0.0, k = 0.0;
    if (cfg.kp_override) {
      k = k_lo = k_hi = *cfg.kp_override;
    } else {
      const auto kp = maximize_quotient(graph, p, cfg.quotient);
      k = kp.value;
      k_lo = kp.lo;
      k_hi = kp.hi;
      est.best_state = kp.best_state;
      est.iterations = kp.iterations;
    }
    est.value = critical_mass_from_constant(p, k);
    est.lo = critical_mass_from_constant(p, k_hi);
    est.hi = critical_mass_from_constant(p, k_lo);
    return est;
  }

  if (!(p < 6.0)) throw std::invalid_argument("estimate_critical_mass: EnergyBisection needs p in [4, 6)");
  if (cfg.starts.empty()) throw std::invalid_argument("estimate_critical_mass: no probe starts");
  if (!(cfg.mu_start > 0.0) || !(cfg.bracket_width > 0.0)) {
    throw std::invalid_argument("estimate_critical_mass: mu_start and bracket_width must be positive");
  }

  auto negative = [&](double mu) {
    ++est.probes;
    for (const auto& start : cfg.starts) {
      MinimizeConfig c = cfg.probe;
      c.p = p;
      c.mu = mu;
      c.init = start;
      if (minimize_energy(graph, c).energy < -cfg.energy_tol) return true;
    }
    return false;
  };

  double lo = cfg.mu_start;
  double hi = cfg.mu_start;
  if (negative(cfg.mu_start)) {
    int k = 0;
    do {
      hi = lo;
      lo *= 0.5;
      if (++k > cfg.max_expansions) throw ComputationError("estimate_critical_mass: no nonnegative-energy mass found below mu_start");
    } while (negative(lo));
  } else {
    int k = 0;
    do {
      lo = hi;
      hi *= 2.0;
      if (++k > cfg.max_expansions) throw ComputationError("estimate_critical_mass: bracket does not straddle a sign change");
    } while (!negative(hi));
  }
  while (hi - lo >= cfg.bracket_width) {
    const double mid = 0.5 * (lo + hi);
    (negative(mid) ? hi : lo) = mid;
  }
  est.lo = lo;
  est.hi = hi;
  est.value = 0.5 * (lo + hi);
  return est;
}

GraphFunction center_state(const GraphFunction& u) {
  if (u.is_zero()) throw std::invalid_argument("center_state: function is identically zero");
  const auto& g = u.graph();
  const double top = norm_linf(u);
  const int m = g.mesh();
  std::optional<LatticePoint> best;
  const auto v = u.values();
  for (std::size_t dof = 0; dof < v.size(); ++dof) {
    if (std::abs(v[dof]) != top) continue;
    const auto [edge, local] = g.dof_location(static_cast<int>(dof));
    const auto& e = g.edges()[edge];
    const int vertex = 2 * local <= m ? e.tail : e.head;
    const auto cand = g.vertices()[vertex];
    if (!best || cand.x < best->x || (cand.x == best->x && cand.y < best->y)) best = cand;
  }
  return translate(u, -best->x, -best->y);
}

}  // namespace gridnls
