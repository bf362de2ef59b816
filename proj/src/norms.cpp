#include "gridnls/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridnls/segment_integrals.hpp"

namespace gridnls {
namespace {

inline double value_of(std::span<const double> values, int dof) {
  return dof == GridGraph::kPinned ? 0.0 : values[dof];
}

// Calls f(a, b, dof_a, dof_b) for every subinterval of every edge.
template <class F>
void for_each_cell(const GridGraph& g, std::span<const double> values, F&& f) {
  const int m = g.mesh();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto nodes = g.edge_nodes(static_cast<int>(e));
    double a = value_of(values, nodes[0]);
    for (int i = 0; i < m; ++i) {
      const double b = value_of(values, nodes[i + 1]);
      f(a, b, nodes[i], nodes[i + 1]);
      a = b;
    }
  }
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("L^p norm requires finite p >= 1");
}

}  // namespace

namespace kernels {

double mass(const GridGraph& g, std::span<const double> values) {
  double sum = 0.0;
  for_each_cell(g, values, [&](double a, double b, int, int) { sum += segment_square(a, b); });
  return sum * g.cell_length();
}

double kinetic(const GridGraph& g, std::span<const double> values) {
  double sum = 0.0;
  for_each_cell(g, values, [&](double a, double b, int, int) { sum += (b - a) * (b - a); });
  return sum / g.cell_length();
}

double lp_power(const GridGraph& g, std::span<const double> values, double p) {
  double sum = 0.0;
  if (p == 2.0) return mass(g, values);
  for_each_cell(g, values, [&](double a, double b, int, int) { sum += segment_power_value(a, b, p); });
  return sum * g.cell_length();
}

double lp_power_gradient(const GridGraph& g, std::span<const double> values, double p, std::span<double> grad) {
  const double h = g.cell_length();
  double sum = 0.0;
  for_each_cell(g, values, [&](double a, double b, int ia, int ib) {
    const auto s = segment_power(a, b, p);
    sum += s.value;
    if (ia != GridGraph::kPinned) grad[ia] += h * s.d_a;
    if (ib != GridGraph::kPinned) grad[ib] += h * s.d_b;
  });
  return sum * h;
}

double kinetic_gradient(const GridGraph& g, std::span<const double> values, std::span<double> grad) {
  const double inv_h = 1.0 / g.cell_length();
  double sum = 0.0;
  for_each_cell(g, values, [&](double a, double b, int ia, int ib) {
    const double d = b - a;
    sum += d * d;
    if (ia != GridGraph::kPinned) grad[ia] -= 2.0 * d * inv_h;
    if (ib != GridGraph::kPinned) grad[ib] += 2.0 * d * inv_h;
  });
  return sum * inv_h;
}

double mass_gradient(const GridGraph& g, std::span<const double> values, std::span<double> grad) {
  const double h = g.cell_length();
  double sum = 0.0;
  for_each_cell(g, values, [&](double a, double b, int ia, int ib) {
    sum += segment_square(a, b);
    if (ia != GridGraph::kPinned) grad[ia] += h * (2.0 * a + b) / 3.0;
    if (ib != GridGraph::kPinned) grad[ib] += h * (a + 2.0 * b) / 3.0;
  });
  return sum * h;
}

}  // namespace kernels

double mass(const GraphFunction& u) { return kernels::mass(u.graph(), u.values()); }

double kinetic(const GraphFunction& u) { return kernels::kinetic(u.graph(), u.values()); }

double lp_power(const GraphFunction& u, double p) {
  check_p(p);
  return kernels::lp_power(u.graph(), u.values(), p);
}

double norm_lp(const GraphFunction& u, double p) { return std::pow(lp_power(u, p), 1.0 / p); }

double norm_linf(const GraphFunction& u) {
  double best = 0.0;
  for (double v : u.values()) best = std::max(best, std::abs(v));
  return best;
}

double grad_l1(const GraphFunction& u) {
  double sum = 0.0;
  for_each_cell(u.graph(), u.values(), [&](double a, double b, int, int) { sum += std::abs(b - a); });
  return sum;
}

double max_cell_mass_fraction(const GraphFunction& u) {
  const auto& w = u.graph().lumped_weights();
  const auto v = u.values();
  double total = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double c = w[i] * v[i] * v[i];
    total += c;
    best = std::max(best, c);
  }
  return total > 0.0 ? best / total : 0.0;
}

}  // namespace gridnls
