#include "gridnls/testfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gridnls/norms.hpp"
#include "gridnls/segment_integrals.hpp"

namespace gridnls {
namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

}  // namespace

ExpFamilyParams make_exp_family(double eps, double mu) {
  check_positive(eps, "eps");
  check_positive(mu, "mu");
  const double q = std::exp(-2.0 * eps);
  return {eps, mu, std::sqrt(0.5 * eps * mu * (1.0 - q) / (1.0 + q))};
}

GraphFunction u_eps(const GridPtr& graph, const ExpFamilyParams& params, double trunc_tol) {
  check_positive(params.eps, "eps");
  const double tail = std::exp(-2.0 * params.eps * graph->half_width());
  if (trunc_tol < 1.0 && !(tail < trunc_tol)) {
    throw std::invalid_argument("u_eps: grid too small, exp(-2 eps L) = " + std::to_string(tail) +
                                " is not below the truncation tolerance");
  }
  GraphFunction u(graph);
  auto v = u.values();
  for (std::size_t dof = 0; dof < graph->num_dofs(); ++dof) {
    const auto [edge, local] = graph->dof_location(static_cast<int>(dof));
    const auto [x, y] = graph->node_position(edge, local);
    v[dof] = params.kappa * std::exp(-params.eps * (std::abs(x) + std::abs(y)));
  }
  return u;
}

ExpFamilyClosedForms u_eps_closed_forms(const ExpFamilyParams& params, double p) {
  check_positive(params.eps, "eps");
  check_positive(params.mu, "mu");
  const double eps = params.eps;
  const double q = std::exp(-eps * p);
  ExpFamilyClosedForms c;
  c.mass = params.mu;
  c.kinetic = eps * eps * params.mu;
  c.lp_power = 2.0 * std::pow(params.kappa, p) * (2.0 / (eps * p)) * (1.0 + q) / (1.0 - q);
  return c;
}

std::vector<AsymptoticRow> energy_asymptotic_probe(double p, double mu, std::span<const double> eps_list, int mesh) {
  if (mesh < 1) throw std::invalid_argument("energy_asymptotic_probe: mesh must be >= 1");
  std::vector<AsymptoticRow> rows;
  rows.reserve(eps_list.size());
  const double h = 1.0 / mesh;
  for (const double eps : eps_list) {
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("energy_asymptotic_probe: eps must lie in (0, 0.5]");
    const auto params = make_exp_family(eps, mu);
    // One unit edge carrying e^{-eps s}: exact integrals of its interpolant.
    double edge_lp = 0.0;
    double edge_l2 = 0.0;
    double edge_kin = 0.0;
    for (int i = 0; i < mesh; ++i) {
      const double a = std::exp(-eps * i * h);
      const double b = std::exp(-eps * (i + 1) * h);
      edge_lp += h * segment_power_value(a, b, p);
      edge_l2 += h * segment_square(a, b);
      edge_kin += (b - a) * (b - a) / h;
    }
    // Line integral of the interpolant of e^{-eps|x|}, then the lattice sum
    // over parallel lines, times two orientations.
    auto grid_total = [&](double edge_value, double r) {
      const double g = std::exp(-r * eps);
      const double line = 2.0 * edge_value / (1.0 - g);
      const double lattice = (1.0 + g) / (1.0 - g);
      return 2.0 * line * lattice;
    };
    AsymptoticRow row;
    row.eps = eps;
    row.potential = std::pow(params.kappa, p) * grid_total(edge_lp, p);
    row.mass = params.kappa * params.kappa * grid_total(edge_l2, 2.0);
    row.kinetic = params.kappa * params.kappa * grid_total(edge_kin, 2.0);
    row.energy = 0.5 * row.kinetic - row.potential / p;
    rows.push_back(row);
  }
  return rows;
}

double soliton_value(double x) { return std::sqrt(1.0 / std::cosh(2.0 * x / kSqrt3)); }

std::vector<double> soliton_profile(double lambda, std::span<const double> x_samples) {
  check_positive(lambda, "lambda");
  std::vector<double> out;
  out.reserve(x_samples.size());
  const double amp = std::sqrt(lambda);
  for (double x : x_samples) out.push_back(amp * soliton_value(lambda * x));
  return out;
}

std::vector<double> soliton_derivative(double lambda, std::span<const double> x_samples) {
  check_positive(lambda, "lambda");
  std::vector<double> out;
  out.reserve(x_samples.size());
  const double amp = lambda * std::sqrt(lambda);
  for (double x : x_samples) {
    const double y = 2.0 * lambda * x / kSqrt3;
    out.push_back(-amp * std::sqrt(1.0 / std::cosh(y)) * std::tanh(y) / kSqrt3);
  }
  return out;
}

SolitonConstants soliton_constants() {
  constexpr double pi = std::numbers::pi;
  return {pi * kSqrt3 / 2.0, 4.0 / (pi * pi)};
}

LineIntegrals soliton_line_quadrature(double lambda, double x_lo, double x_hi, std::size_t n) {
  if (n < 2 || !(x_hi > x_lo)) throw std::invalid_argument("soliton_line_quadrature: need n >= 2 and x_hi > x_lo");
  std::vector<double> xs(n);
  const double dx = (x_hi - x_lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = x_lo + dx * static_cast<double>(i);
  const auto f = soliton_profile(lambda, xs);
  const auto df = soliton_derivative(lambda, xs);
  LineIntegrals r;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * dx : dx;
    const double f2 = f[i] * f[i];
    r.mass += w * f2;
    r.kinetic += w * df[i] * df[i];
    r.l6_power += w * f2 * f2 * f2;
  }
  return r;
}

double soliton_lp_power(double lambda, double p) {
  check_positive(lambda, "lambda");
  return std::pow(lambda, 0.5 * p - 1.0) * 0.5 * kSqrt3 * std::beta(0.25 * p, 0.5);
}

double max_edge_soliton_scale(double amplitude_floor) {
  // Tail condition phi(1/(2 eps^2)) <= floor * phi(0); phi(x)^2 = sech(2x/sqrt3).
  const double x = 0.5 * kSqrt3 * std::acosh(1.0 / (amplitude_floor * amplitude_floor));
  return std::sqrt(0.5 / x);
}

GraphFunction compact_edge_soliton(const GridPtr& graph, double eps_scale, int edge, const EdgeSolitonOptions& options) {
  check_positive(eps_scale, "eps_scale");
  if (!(options.amplitude_floor > 0.0 && options.amplitude_floor < 1.0)) {
    throw std::invalid_argument("compact_edge_soliton: amplitude floor must lie in (0, 1)");
  }
  if (eps_scale > max_edge_soliton_scale(options.amplitude_floor)) {
    throw std::invalid_argument("compact_edge_soliton: eps_scale too large, tail at the edge ends exceeds the floor");
  }
  if (edge < 0) edge = graph->edge_id(0, 0, Orientation::Horizontal);
  const int m = graph->mesh();
  const double e2 = eps_scale * eps_scale;
  const double peak = 1.0 / eps_scale;
  std::vector<double> profile(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = 1; i < m; ++i) {
    const double s = static_cast<double>(i) / m;
    const double w = soliton_value((s - 0.5) / e2) / eps_scale;
    profile[i] = w < options.amplitude_floor * peak ? 0.0 : w;
  }
  auto u = embed_edge_function(graph, edge, profile);
  if (u.is_zero()) throw std::invalid_argument("compact_edge_soliton: mesh too coarse, no node inside the support");
  if (options.renormalize) u *= std::sqrt(soliton_constants().mu_R / mass(u));
  return u;
}

GraphFunction random_function(const GridPtr& graph, std::mt19937_64& rng, SampleKind kind) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GraphFunction u(graph);
  auto v = u.values();
  const int L = graph->half_width();
  switch (kind) {
    case SampleKind::UniformMixed:
      for (auto& x : v) x = 2.0 * unit(rng) - 1.0;
      break;
    case SampleKind::UniformNonneg:
      for (auto& x : v) x = unit(rng);
      break;
    case SampleKind::Bumps: {
      const int count = 1 + static_cast<int>(unit(rng) * 4.0);
      for (int b = 0; b < count; ++b) {
        const double cx = (2.0 * unit(rng) - 1.0) * (L - 0.5);
        const double cy = (2.0 * unit(rng) - 1.0) * (L - 0.5);
        const double r = 0.2 + 1.8 * unit(rng);
        const double amp = (unit(rng) < 0.25 ? -1.0 : 1.0) * (0.1 + unit(rng));
        for (std::size_t dof = 0; dof < v.size(); ++dof) {
          const auto [edge, local] = graph->dof_location(static_cast<int>(dof));
          const auto [x, y] = graph->node_position(edge, local);
          v[dof] += amp * std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (r * r));
        }
      }
      break;
    }
    case SampleKind::Spike: {
      const auto dof = static_cast<std::size_t>(unit(rng) * static_cast<double>(v.size())) % v.size();
      v[dof] = 0.5 + unit(rng);
      break;
    }
    case SampleKind::Exponential: {
      const auto params = make_exp_family(0.2 + 2.0 * unit(rng), 0.5 + 2.0 * unit(rng));
      auto e = u_eps(graph, params, 2.0);
      const int dx = static_cast<int>(std::floor((2.0 * unit(rng) - 1.0) * 0.5 * L));
      const int dy = static_cast<int>(std::floor((2.0 * unit(rng) - 1.0) * 0.5 * L));
      return translate(e, dx, dy);
    }
  }
  if (u.is_zero() && !v.empty()) v[0] = 1.0;
  return u;
}

GraphFunction random_function(const GridPtr& graph, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 4);
  return random_function(graph, rng, static_cast<SampleKind>(pick(rng)));
}

}  // namespace gridnls
