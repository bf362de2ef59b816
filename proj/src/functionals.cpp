#include "gridnls/functionals.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gridnls/norms.hpp"

namespace gridnls {
namespace {

void check_energy_exponent(double p) {
  if (!(p > 2.0) || !(p <= 6.0)) {
    throw std::invalid_argument("energy exponent p must lie in (2, 6]; for p > 6 the energy is unbounded below by scaling (got " +
                                std::to_string(p) + ")");
  }
}

void require_nonzero(const GraphFunction& u, const char* what) {
  if (u.is_zero()) throw std::invalid_argument(std::string(what) + ": function is identically zero");
}

constexpr std::array<std::pair<InequalityKind, std::string_view>, 6> kNames = {{
    {InequalityKind::GN1D, "GN1D"},
    {InequalityKind::GNInfty, "GNInfty"},
    {InequalityKind::Sobolev2D, "Sobolev2D"},
    {InequalityKind::GN2D, "GN2D"},
    {InequalityKind::Interdimensional, "Interdimensional"},
    {InequalityKind::GNCritical, "GNCritical"},
}};

}  // namespace

EnergyBreakdown energy(const GraphFunction& u, double p) {
  check_energy_exponent(p);
  EnergyBreakdown b;
  b.p = p;
  b.mass = mass(u);
  b.kinetic = kinetic(u);
  b.potential_p = lp_power(u, p);
  b.energy = 0.5 * b.kinetic - b.potential_p / p;
  return b;
}

GraphFunction energy_gradient(const GraphFunction& u, double p) {
  check_energy_exponent(p);
  const auto& g = u.graph();
  std::vector<double> kin(g.num_dofs(), 0.0);
  std::vector<double> pot(g.num_dofs(), 0.0);
  kernels::kinetic_gradient(g, u.values(), kin);
  kernels::lp_power_gradient(g, u.values(), p, pot);
  for (std::size_t i = 0; i < kin.size(); ++i) kin[i] = 0.5 * kin[i] - pot[i] / p;
  return GraphFunction(u.graph_ptr(), std::move(kin));
}

double quotient_unchecked(const GraphFunction& u, double p) {
  require_nonzero(u, "gn_quotient");
  const double mu = mass(u);
  const double kin = kinetic(u);
  if (!(kin > 0.0)) throw std::invalid_argument("gn_quotient: derivative vanishes identically");
  return lp_power(u, p) / (std::pow(mu, 0.5 * (p - 2.0)) * kin);
}

QuotientValue gn_quotient(const GraphFunction& u, double p) {
  if (!(p >= 4.0 && p <= 6.0)) throw std::invalid_argument("gn_quotient: p must lie in [4, 6]");
  return {p, quotient_unchecked(u, p)};
}

std::string_view to_string(InequalityKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<InequalityKind> inequality_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

double critical_gn_constant(double p) {
  if (p == 6.0) return 4.0 / (std::numbers::pi * std::numbers::pi);
  return std::pow(kInterdimensionalConstant, p);
}

std::pair<double, double> interdimensional_alpha_range(double p) { return {(p - 2.0) / (2.0 * p), (p - 2.0) / p}; }

InequalityReport check_inequality(const GraphFunction& u, InequalityKind kind, const InequalityParams& params) {
  require_nonzero(u, "check_inequality");
  const double p = params.p;
  const bool needs_p = kind == InequalityKind::GN1D || kind == InequalityKind::GN2D ||
                       kind == InequalityKind::Interdimensional || kind == InequalityKind::GNCritical;
  if (needs_p && !(p >= 2.0 && std::isfinite(p))) throw std::invalid_argument("check_inequality: p must be >= 2");
  if (kind == InequalityKind::GNCritical && !(p >= 4.0 && p <= 6.0)) {
    throw std::invalid_argument("check_inequality: GNCritical needs p in [4, 6]");
  }

  const double l2 = std::sqrt(mass(u));
  const double d2 = std::sqrt(kinetic(u));
  InequalityReport r;
  r.name = kind;
  // Exponent of the norm on the left: infinity for GNInfty, 2 for Sobolev2D.
  r.p = needs_p ? p : (kind == InequalityKind::GNInfty ? std::numeric_limits<double>::infinity() : 2.0);
  switch (kind) {
    case InequalityKind::GN1D:
      r.alpha = 0.5 - 1.0 / p;
      r.constant = params.constant.value_or(1.0);
      r.lhs = norm_lp(u, p);
      r.rhs = r.constant * std::pow(l2, 0.5 + 1.0 / p) * std::pow(d2, 0.5 - 1.0 / p);
      break;
    case InequalityKind::GNInfty:
      r.alpha = 0.5;
      r.constant = params.constant.value_or(1.0);
      r.lhs = norm_linf(u);
      r.rhs = r.constant * std::sqrt(l2 * d2);
      break;
    case InequalityKind::Sobolev2D:
      r.alpha = 1.0;
      r.constant = params.constant.value_or(0.5);
      r.lhs = l2;
      r.rhs = r.constant * grad_l1(u);
      break;
    case InequalityKind::GN2D:
      r.alpha = 1.0 - 2.0 / p;
      r.constant = params.constant.value_or(kGN2DConstant);
      r.lhs = norm_lp(u, p);
      r.rhs = r.constant * std::pow(l2, 2.0 / p) * std::pow(d2, 1.0 - 2.0 / p);
      break;
    case InequalityKind::Interdimensional: {
      const auto [lo, hi] = interdimensional_alpha_range(p);
      const double a = params.alpha;
      if (!(a >= lo - 1e-15 && a <= hi + 1e-15)) {
        throw std::invalid_argument("check_inequality: alpha outside [(p-2)/(2p), (p-2)/p]");
      }
      r.alpha = a;
      r.constant = params.constant.value_or(kInterdimensionalConstant);
      r.lhs = norm_lp(u, p);
      r.rhs = r.constant * std::pow(l2, 1.0 - a) * std::pow(d2, a);
      break;
    }
    case InequalityKind::GNCritical:
      r.alpha = 2.0 / p;
      r.constant = params.constant.value_or(critical_gn_constant(p));
      r.lhs = lp_power(u, p);
      r.rhs = r.constant * std::pow(l2, p - 2.0) * d2 * d2;
      break;
  }
  r.slack = r.rhs - r.lhs;
  return r;
}

IdentityCheck energy_identity_check(const GraphFunction& u, double p, double mu, std::optional<double> kp_estimate,
                                    double mass_tol) {
  const auto e = energy(u, p);
  if (std::abs(e.mass - mu) > mass_tol * mu) {
    throw std::invalid_argument("energy_identity_check: mass " + std::to_string(e.mass) + " differs from mu " +
                                std::to_string(mu));
  }
  require_nonzero(u, "energy_identity_check");
  IdentityCheck out;
  out.direct = e.energy;
  const double q = e.potential_p / (std::pow(e.mass, 0.5 * (p - 2.0)) * e.kinetic);
  out.identity = 0.5 * e.kinetic * (1.0 - (2.0 / p) * q * std::pow(mu, 0.5 * (p - 2.0)));
  if (kp_estimate) {
    const double mu_p = critical_mass_from_constant(p, *kp_estimate);
    out.lower_bound = 0.5 * e.kinetic * (1.0 - std::pow(mu / mu_p, 0.5 * (p - 2.0)));
  }
  return out;
}

double critical_mass_from_constant(double p, double kp) {
  if (!(kp > 0.0)) throw std::invalid_argument("critical mass: K_p must be positive");
  return std::pow(p / (2.0 * kp), 2.0 / (p - 2.0));
}

}  // namespace gridnls
