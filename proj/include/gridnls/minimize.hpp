// Mass-constrained minimization of the NLS energy, ascent of the
// Gagliardo-Nirenberg quotient, and critical-mass estimation.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridnls/grid.hpp"

namespace gridnls {

/// Numerical failure that is not a caller error (e.g. a bisection bracket
/// that never straddles a sign change).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitKind { ExpFamily, EdgeSoliton, Provided };

struct InitSpec {
  InitKind kind{InitKind::ExpFamily};
  double eps{0.5};             ///< ExpFamily decay rate
  double soliton_scale{0.1};   ///< EdgeSoliton squeeze parameter
  std::optional<GraphFunction> provided;
};

std::string_view to_string(InitKind kind);
std::optional<InitKind> init_kind_from_string(std::string_view name);

struct MinimizeConfig {
  double p{3.0};
  double mu{1.0};
  int max_iters{20000};
  double grad_tol{1e-6};
  double step0{1.0};
  double backtrack{0.5};
  double step_max{1.0};
  double concentration_threshold{0.5};
  InitSpec init{};
  double perturbation{0.0};  ///< relative amplitude of seeded noise added to the start
  std::uint64_t seed{0};
};

/// Throws std::invalid_argument describing the first invalid field.
void validate(const MinimizeConfig& cfg);

enum class MinimizeStatus { Converged, NonNegativeInfimum, ConcentrationDetected, MaxItersReached };

std::string_view to_string(MinimizeStatus s);

struct MinimizeResult {
  GraphFunction state;
  double energy{0.0};
  MinimizeStatus status{MinimizeStatus::MaxItersReached};
  int iterations{0};
  double grad_norm{0.0};      ///< sqrt(g . A^{-1} g) of the mass-projected gradient
  double multiplier{0.0};     ///< Lagrange multiplier lambda in  grad E = lambda M u
  double concentration{0.0};  ///< largest fraction of mass in one nodal cell
  std::vector<double> energy_history;  ///< energy of every accepted iterate, starting with the initial state
  /// p == 4: attainment at the critical mass is not settled, so any status
  /// reached there is reported as-is.
  bool open_regime{false};
};

/// Projected preconditioned gradient descent on the sphere {mass = mu}: the
/// gradient is preconditioned by (K + sigma M)^{-1}, made tangent to the
/// sphere, then each step is renormalized and backtracked until the energy
/// decreases (Armijo).
MinimizeResult minimize_energy(const GridPtr& graph, const MinimizeConfig& cfg);

struct QuotientConfig {
  int max_iters{4000};
  double grad_tol{1e-7};
  double step0{1.0};
  double backtrack{0.5};
  std::vector<double> start_eps{0.3, 0.7, 1.5};
  bool edge_soliton_start{true};
  double soliton_scale{0.1};
  std::vector<GraphFunction> extra_starts;
  int certification_samples{200};
  std::uint64_t seed{0};
  double safety{0.05};  ///< relative width of the reported bracket above the best value
  std::optional<double> k4_hint;  ///< K_4 for the non-degeneracy bound; (3/2)^4 if absent
};

enum class EstimateMethod { QuotientAscent, EnergyBisection, Formula };
std::string_view to_string(EstimateMethod m);

struct ConstantEstimate {
  double p{0.0};
  double value{0.0};
  double lo{0.0};
  double hi{0.0};
  EstimateMethod method{EstimateMethod::QuotientAscent};

  // QuotientAscent diagnostics.
  std::optional<GraphFunction> best_state;  ///< maximizer, normalized to unit mass
  double best_sample_quotient{0.0};         ///< max Q over the certification set
  int certified_samples{0};
  int iterations{0};
  double compactness_bound{0.0};    ///< mu_p^{(6-p)/4} / ||u'||^{(6-p)/2} at mass mu_p
  double nondegeneracy_bound{0.0};  ///< ||u||_inf^{p-4} K_4 / mu_p^{(p-4)/2} at mass mu_p

  // EnergyBisection diagnostics.
  int probes{0};
};

/// Ascent of log Q_p on the unit-mass sphere from several starts; p in [4, 6].
ConstantEstimate maximize_quotient(const GridPtr& graph, double p, const QuotientConfig& cfg = {});

struct CriticalMassConfig {
  QuotientConfig quotient{};
  /// Template for every bisection probe (p, mu and init are overwritten).
  MinimizeConfig probe{};
  /// Starts tried at every probe; a probe is "negative" if any reaches
  /// energy < -energy_tol.
  std::vector<InitSpec> starts{InitSpec{InitKind::ExpFamily, 0.5, 0.1, std::nullopt},
                               InitSpec{InitKind::ExpFamily, 1.5, 0.1, std::nullopt},
                               InitSpec{InitKind::EdgeSoliton, 0.5, 0.1, std::nullopt}};
  double energy_tol{1e-9};
  double bracket_width{1e-2};
  double mu_start{1.0};
  int max_expansions{12};
  std::optional<double> kp_override;  ///< Formula: use this K_p instead of ascending
};

/// Formula: (p / (2 K_p))^{2/(p-2)} from maximize_quotient (p in [4, 6]).
/// EnergyBisection: bisection on the sign of the minimized energy (p in [4, 6)).
ConstantEstimate estimate_critical_mass(const GridPtr& graph, double p, EstimateMethod method,
                                        const CriticalMassConfig& cfg = {});

/// Translate so that the vertex nearest the global max of |u| sits at the
/// origin. Ties go to the lexicographically smallest vertex.
GraphFunction center_state(const GraphFunction& u);

}  // namespace gridnls
