#include "gridnls/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridnls/norms.hpp"
#include "gridnls/segment_integrals.hpp"

namespace gridnls {

double LineFunction::lp_power(double p) const {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double dx = x[i + 1] - x[i];
    if (dx > 0.0) sum += dx * segment_power_value(value[i], value[i + 1], p);
  }
  return sum;
}

double LineFunction::norm_lp(double p) const { return std::pow(lp_power(p), 1.0 / p); }

double LineFunction::kinetic() const {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double dx = x[i + 1] - x[i];
    const double dv = value[i + 1] - value[i];
    if (dx > 0.0) sum += dv * dv / dx;
  }
  return sum;
}

double LineFunction::operator()(double t) const {
  if (x.empty() || t <= x.front() || t >= x.back()) return 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  const auto i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double dx = x[i + 1] - x[i];
  if (dx <= 0.0) return value[i];
  return value[i] + (value[i + 1] - value[i]) * (t - x[i]) / dx;
}

LineFunction symmetric_rearrangement(const GraphFunction& u) {
  const auto& g = u.graph();
  for (double v : u.values()) {
    if (v < 0.0) throw std::invalid_argument("symmetric_rearrangement: function must be nonnegative");
  }
  if (u.is_zero()) throw std::invalid_argument("symmetric_rearrangement: function is identically zero");

  // Distinct levels, descending, always ending at 0.
  std::vector<double> levels(u.values().begin(), u.values().end());
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t n = levels.size();
  auto index_of = [&](double t) {
    return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), t, std::greater<>()) - levels.begin());
  };

  // rate_diff: slope of |{u > t}| in -t on (levels[k+1], levels[k]);
  // plateau: measure of {u == levels[k]} from flat cells.
  std::vector<double> rate_diff(n + 1, 0.0);
  std::vector<double> plateau(n, 0.0);
  const double h = g.cell_length();
  const int m = g.mesh();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    for (int i = 0; i < m; ++i) {
      const double a = u.at(static_cast<int>(e), i);
      const double b = u.at(static_cast<int>(e), i + 1);
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      if (hi == 0.0) continue;
      if (lo == hi) {
        plateau[index_of(hi)] += h;
        continue;
      }
      const double rate = h / (hi - lo);
      rate_diff[index_of(hi)] += rate;
      rate_diff[index_of(lo)] -= rate;
    }
  }

  std::vector<double> half_x{0.0};
  std::vector<double> half_v{levels[0]};
  double measure = 0.0;  // |{u > levels[k]}|
  double rate = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    measure += plateau[k];
    if (plateau[k] > 0.0) {
      half_x.push_back(0.5 * measure);
      half_v.push_back(levels[k]);
    }
    rate += rate_diff[k];
    measure += rate * (levels[k] - levels[k + 1]);
    half_x.push_back(0.5 * measure);
    half_v.push_back(levels[k + 1]);
  }

  LineFunction out;
  const std::size_t hn = half_x.size();
  out.x.reserve(2 * hn - 1);
  out.value.reserve(2 * hn - 1);
  for (std::size_t i = hn; i-- > 1;) {
    out.x.push_back(-half_x[i]);
    out.value.push_back(half_v[i]);
  }
  for (std::size_t i = 0; i < hn; ++i) {
    out.x.push_back(half_x[i]);
    out.value.push_back(half_v[i]);
  }
  return out;
}

int count_preimages(const GraphFunction& u, double t) {
  const double top = norm_linf(u);
  if (!(t > 0.0 && t < top)) throw std::invalid_argument("count_preimages: level must lie in (0, ||u||_inf)");
  const auto vals = u.values();
  for (int guard = 0; guard < 8 && std::find(vals.begin(), vals.end(), t) != vals.end(); ++guard) {
    t += 1e-12 * top;
  }
  const auto& g = u.graph();
  const int m = g.mesh();
  int crossings = 0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    for (int i = 0; i < m; ++i) {
      const double a = u.at(static_cast<int>(e), i) - t;
      const double b = u.at(static_cast<int>(e), i + 1) - t;
      if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) ++crossings;
    }
  }
  return crossings;
}

}  // namespace gridnls
