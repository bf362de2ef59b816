// Symmetric decreasing rearrangement of a nonnegative grid function onto the
// real line, and level-set preimage counting.
#pragma once

#include <vector>

#include "gridnls/grid.hpp"

namespace gridnls {

/// Even, nonincreasing-in-|x| piecewise-linear function on the line, stored
/// by its breakpoints in increasing x (so x.front() = -x.back()). Outside
/// [x.front(), x.back()] it vanishes.
struct LineFunction {
  std::vector<double> x;
  std::vector<double> value;

  double lp_power(double p) const;
  double norm_lp(double p) const;
  double mass() const { return lp_power(2.0); }
  double kinetic() const;
  double support_length() const { return x.empty() ? 0.0 : x.back() - x.front(); }
  /// Linear interpolation; 0 outside the support.
  double operator()(double t) const;
};

/// Exact rearrangement of the piecewise-linear interpolant: the distribution
/// function |{u > t}| is piecewise linear in t with kinks at nodal values, so
/// its inverse is piecewise linear too and every L^r norm is preserved.
/// Rejects negative values and u == 0.
LineFunction symmetric_rearrangement(const GraphFunction& u);

/// Number of transversal crossings of level t. Requires 0 < t < ||u||_inf.
/// Levels equal to a nodal value are nudged up by 1e-12 ||u||_inf.
int count_preimages(const GraphFunction& u, double t);

}  // namespace gridnls
