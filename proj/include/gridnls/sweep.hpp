// (p, mu) phase-diagram sweeps over independent minimization runs.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gridnls/grid.hpp"
#include "gridnls/minimize.hpp"

namespace gridnls {

/// Inclusive arithmetic range lo, lo+step, ..., up to hi.
struct Range {
  double lo{0.0};
  double hi{0.0};
  double step{1.0};

  /// Throws std::invalid_argument for step <= 0, hi < lo or non-finite bounds.
  std::vector<double> values() const;
};

struct SweepSpec {
  Range p_range;
  Range mu_range;
  GridSpec grid{20, 16};
  /// Per-point template; p, mu and seed are overwritten for each point.
  MinimizeConfig overrides{};
  std::uint64_t seed{0};
  /// Interpret mu values as multiples of the Formula estimate of mu_p.
  bool relative_to_critical{false};
  /// 0: take GRIDNLS_THREADS, else the hardware concurrency.
  int threads{0};
};

struct PhasePoint {
  double p{0.0};
  double mu{0.0};
  std::string status;  ///< MinimizeStatus name, or "Error" for a failed point
  double energy{0.0};
  int iters{0};
  double grad_norm{0.0};
  std::optional<double> mu_p_estimate_used;
  std::string error;  ///< message of a failed point
};

/// Worker count: `requested` if positive, else GRIDNLS_THREADS, else the
/// hardware concurrency; never more than `jobs` and never below 1.
int resolve_thread_count(int requested, std::size_t jobs);

/// Deterministic for a given spec; per-point failures become "Error" rows.
/// Rows are sorted by (p, mu).
std::vector<PhasePoint> run_sweep(const SweepSpec& spec);

inline constexpr const char* kSweepCsvHeader = "p,mu,status,energy,iters,grad_norm";
void write_sweep_csv(const std::vector<PhasePoint>& rows, std::ostream& out);

}  // namespace gridnls
