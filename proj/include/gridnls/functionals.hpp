// NLS energy, its gradient, the Gagliardo-Nirenberg quotient, and the
// inequality family on the grid as checkable reports.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gridnls/grid.hpp"

namespace gridnls {

struct EnergyBreakdown {
  double mass{0.0};
  double kinetic{0.0};
  double potential_p{0.0};  ///< \int |u|^p
  double p{0.0};
  double energy{0.0};       ///< kinetic/2 - potential_p/p
};

/// p must lie in (2, 6]; beyond 6 the constrained energy is unbounded below.
EnergyBreakdown energy(const GraphFunction& u, double p);

/// Euclidean (nodal) gradient: energy(u + t v) = energy(u) + t <g, v> + O(t^2)
/// with <g, v> = sum_i g_i v_i over DOFs.
GraphFunction energy_gradient(const GraphFunction& u, double p);

struct QuotientValue {
  double p{0.0};
  double value{0.0};
};

/// Q_p(u) = ||u||_p^p / (||u||_2^{p-2} ||u'||_2^2) for p in [4, 6].
/// Rejects u == 0.
QuotientValue gn_quotient(const GraphFunction& u, double p);

/// Same quotient without the [4,6] restriction on p (p >= 2); used by the
/// optimizers and by callers probing outside the critical window.
double quotient_unchecked(const GraphFunction& u, double p);

enum class InequalityKind { GN1D, GNInfty, Sobolev2D, GN2D, Interdimensional, GNCritical };

std::string_view to_string(InequalityKind kind);
std::optional<InequalityKind> inequality_from_string(std::string_view name);

/// Constant in the 2D Gagliardo-Nirenberg inequality.
inline constexpr double kGN2DConstant = 1.5;
/// Interdimensional constant: larger of the two endpoint constants (1 and 3/2).
inline constexpr double kInterdimensionalConstant = 1.5;

/// Constant used for the critical inequality ||u||_p^p <= K ||u||_2^{p-2} ||u'||_2^2:
/// the sharp value 4/pi^2 at p = 6 and (3/2)^p otherwise.
double critical_gn_constant(double p);

struct InequalityParams {
  double p{4.0};
  double alpha{0.0};  ///< Interdimensional only
  std::optional<double> constant;  ///< overrides the default constant
};

struct InequalityReport {
  InequalityKind name{InequalityKind::GN1D};
  double lhs{0.0};
  double rhs{0.0};
  double slack{0.0};  ///< rhs - lhs
  double p{0.0};
  double alpha{0.0};  ///< exponent on the derivative norm in the reported form
  double constant{1.0};
  bool violated() const noexcept { return slack < 0.0; }
};

/// Admissible exponent window for the interdimensional inequality.
std::pair<double, double> interdimensional_alpha_range(double p);

InequalityReport check_inequality(const GraphFunction& u, InequalityKind kind, const InequalityParams& params = {});

struct IdentityCheck {
  double direct{0.0};    ///< kinetic/2 - potential/p
  double identity{0.0};  ///< (kinetic/2)(1 - (2/p) Q_p mu^{(p-2)/2})
  std::optional<double> lower_bound;  ///< (kinetic/2)(1 - (mu/mu_p)^{(p-2)/2})
};

/// Requires |mass(u) - mu| <= mass_tol * mu. The lower bound is filled when
/// an estimate of K_p is supplied.
IdentityCheck energy_identity_check(const GraphFunction& u, double p, double mu,
                                    std::optional<double> kp_estimate = std::nullopt, double mass_tol = 1e-9);

/// (p / (2 K_p))^{2/(p-2)}
double critical_mass_from_constant(double p, double kp);

}  // namespace gridnls
