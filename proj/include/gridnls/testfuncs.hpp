// Explicit function families with closed-form norms: the separable
// exponential u_eps on the grid, the quintic soliton on the real line, and
// its compactly supported squeeze onto a single edge.
#pragma once

#include <random>
#include <span>
#include <vector>

#include "gridnls/grid.hpp"

namespace gridnls {

struct ExpFamilyParams {
  double eps{0.5};
  double mu{1.0};
  double kappa{0.0};  ///< amplitude that makes the mass on the infinite grid exactly mu
};

/// kappa^2 = (eps mu / 2) (1 - e^{-2 eps}) / (1 + e^{-2 eps})
ExpFamilyParams make_exp_family(double eps, double mu);

/// Nodal interpolant of kappa e^{-eps(|x|+|y|)} centred at the origin vertex.
/// Throws when e^{-2 eps L} >= trunc_tol (pass trunc_tol >= 1 to skip).
GraphFunction u_eps(const GridPtr& graph, const ExpFamilyParams& params, double trunc_tol = 1e-12);

struct ExpFamilyClosedForms {
  double mass{0.0};
  double kinetic{0.0};
  double lp_power{0.0};  ///< \int |u_eps|^p on the infinite grid
};

ExpFamilyClosedForms u_eps_closed_forms(const ExpFamilyParams& params, double p);

struct AsymptoticRow {
  double eps{0.0};
  double mass{0.0};
  double energy{0.0};
  double kinetic{0.0};
  double potential{0.0};  ///< \int |u_eps|^p
};

/// Energies of the piecewise-linear interpolant of u_eps (mesh subintervals
/// per edge) on the untruncated grid. The function is separable, so every
/// line contributes a geometric multiple of one edge integral.
std::vector<AsymptoticRow> energy_asymptotic_probe(double p, double mu, std::span<const double> eps_list, int mesh = 16);

/// phi_lambda(x) = sqrt(lambda) sech(2 lambda x / sqrt 3)^{1/2}
std::vector<double> soliton_profile(double lambda, std::span<const double> x_samples);
std::vector<double> soliton_derivative(double lambda, std::span<const double> x_samples);
double soliton_value(double x);

struct SolitonConstants {
  double mu_R;  ///< pi sqrt(3) / 2
  double K_R;   ///< 4 / pi^2
};
SolitonConstants soliton_constants();

struct LineIntegrals {
  double mass{0.0};
  double kinetic{0.0};
  double l6_power{0.0};
  double quotient6() const { return l6_power / (mass * mass * kinetic); }
};

/// Composite trapezoid on [x_lo, x_hi] with n nodes, using the analytic
/// derivative of the profile.
LineIntegrals soliton_line_quadrature(double lambda, double x_lo, double x_hi, std::size_t n);

/// \int phi_lambda^p over the real line: lambda^{p/2-1} (sqrt3/2) B(p/4, 1/2).
double soliton_lp_power(double lambda, double p);

struct EdgeSolitonOptions {
  double amplitude_floor{1e-10};  ///< relative to the peak; smaller samples are cut to 0
  bool renormalize{true};         ///< rescale to the soliton mass after cutting
};

/// The soliton squeezed by w(x) -> w(x / eps^2) / eps, centred on `edge`
/// (default: the horizontal edge leaving the origin), sampled at the mesh
/// nodes and zero elsewhere.
GraphFunction compact_edge_soliton(const GridPtr& graph, double eps_scale, int edge = -1,
                                   const EdgeSolitonOptions& options = {});

/// Largest eps_scale whose squeezed tail at the edge ends falls below the floor.
double max_edge_soliton_scale(double amplitude_floor = 1e-10);

/// Random grid functions for property suites.
enum class SampleKind { UniformMixed, UniformNonneg, Bumps, Spike, Exponential };

GraphFunction random_function(const GridPtr& graph, std::mt19937_64& rng, SampleKind kind);
/// Picks the kind uniformly at random as well.
GraphFunction random_function(const GridPtr& graph, std::mt19937_64& rng);

}  // namespace gridnls
