// Norms of piecewise-linear grid functions. All integrals are exact for the
// piecewise-linear interpolant, summed edge by edge.
#pragma once

#include <span>
#include <vector>

#include "gridnls/grid.hpp"

namespace gridnls {

/// \int |u|^2
double mass(const GraphFunction& u);
/// \int |u'|^2
double kinetic(const GraphFunction& u);
/// \int |u|^p (the p-th power, not the norm). Requires p >= 1.
double lp_power(const GraphFunction& u, double p);
/// ||u||_p. Requires p >= 1.
double norm_lp(const GraphFunction& u, double p);
double norm_linf(const GraphFunction& u);
/// \int |u'|
double grad_l1(const GraphFunction& u);

/// Raw-vector kernels used by the optimizers; `values` is indexed by DOF.
namespace kernels {
double mass(const GridGraph& g, std::span<const double> values);
double kinetic(const GridGraph& g, std::span<const double> values);
double lp_power(const GridGraph& g, std::span<const double> values, double p);
/// Accumulates d/du of \int |u|^p into `grad` (must be zeroed by the caller
/// or hold a running sum); returns the integral.
double lp_power_gradient(const GridGraph& g, std::span<const double> values, double p, std::span<double> grad);
/// grad += d/du (\int |u'|^2); returns the integral.
double kinetic_gradient(const GridGraph& g, std::span<const double> values, std::span<double> grad);
/// grad += d/du (\int |u|^2); returns the integral.
double mass_gradient(const GridGraph& g, std::span<const double> values, std::span<double> grad);
}  // namespace kernels

/// Fraction of the total (lumped) mass held by each DOF's dual cell; the
/// maximum is the concentration diagnostic.
double max_cell_mass_fraction(const GraphFunction& u);

}  // namespace gridnls
