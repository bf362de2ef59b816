#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gridnls/grid.hpp"

namespace testing {

// Profile f(s) sampled at the m+1 nodes of one edge.
inline std::vector<double> sample_profile(int m, const std::function<double(double)>& f) {
  std::vector<double> out(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) out[i] = f(static_cast<double>(i) / m);
  out.front() = 0.0;
  out.back() = 0.0;
  return out;
}

// Tent of height 1/2 on the horizontal edge leaving the origin.
inline gridnls::GraphFunction tent(const gridnls::GridPtr& g) {
  const int e = g->edge_id(0, 0, gridnls::Orientation::Horizontal);
  const auto prof = sample_profile(g->mesh(), [](double s) { return std::min(s, 1.0 - s); });
  return gridnls::embed_edge_function(g, e, prof);
}

// Composite Gauss-Legendre (5 points) of f on [a, b] with n panels.
inline double gauss5(const std::function<double(double)>& f, double a, double b, int n) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                              0.2369268850561891};
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double c = a + (k + 0.5) * h;
    for (int j = 0; j < 5; ++j) sum += w[j] * f(c + 0.5 * h * x[j]);
  }
  return 0.5 * h * sum;
}

// Integral of f from `root` to `end` for f with a power-type kink at `root`:
// geometrically graded panels shrinking towards the root.
inline double gauss_graded(const std::function<double(double)>& f, double root, double end) {
  double sum = 0.0;
  double far = 1.0;
  for (int k = 0; k < 80; ++k) {
    const double near = 0.5 * far;
    const double x0 = root + (end - root) * near;
    const double x1 = root + (end - root) * far;
    sum += gauss5(f, std::min(x0, x1), std::max(x0, x1), 4);
    far = near;
  }
  return sum;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
