#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gridnls/functionals.hpp"
#include "gridnls/minimize.hpp"
#include "gridnls/norms.hpp"
#include "gridnls/testfuncs.hpp"
#include "helpers.hpp"

using namespace gridnls;
using testing::rel_err;

namespace {

MinimizeConfig config(double p, double mu) {
  MinimizeConfig c;
  c.p = p;
  c.mu = mu;
  return c;
}

void check_run_invariants(const MinimizeResult& r, const MinimizeConfig& c) {
  CHECK(std::abs(mass(r.state) - c.mu) <= 1e-10 * c.mu);
  for (std::size_t i = 1; i < r.energy_history.size(); ++i) CHECK(r.energy_history[i] <= r.energy_history[i - 1]);
  if (r.status == MinimizeStatus::Converged) CHECK(r.grad_norm < c.grad_tol);
  CHECK(r.energy == doctest::Approx(energy(r.state, c.p).energy).epsilon(1e-12));
}

}  // namespace

TEST_CASE("config validation") {
  auto c = config(3.0, 1.0);
  CHECK_NOTHROW(validate(c));
  c.p = 6.5;
  try {
    validate(c);
    FAIL("p > 6 accepted");
  } catch (const std::invalid_argument& ex) {
    CHECK(std::string(ex.what()).find("scaling") != std::string::npos);
  }
  c = config(2.0, 1.0);
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config(3.0, -1.0);
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config(3.0, 1.0);
  c.concentration_threshold = 1.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config(3.0, 1.0);
  c.grad_tol = 0.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = config(3.0, 1.0);
  c.backtrack = 1.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("subcritical exponents: negative-energy ground states") {
  auto g = build_grid({20, 4});
  for (double p : {2.5, 3.0}) {
    for (double mu : {0.25, 1.0, 4.0}) {
      const auto c = config(p, mu);
      const auto r = minimize_energy(g, c);
      CAPTURE(p);
      CAPTURE(mu);
      CHECK(r.status == MinimizeStatus::Converged);
      CHECK(r.energy < 0.0);
      CHECK(r.multiplier < 0.0);
      check_run_invariants(r, c);
    }
  }
  const auto c = config(3.5, 4.0);
  const auto r = minimize_energy(g, c);
  CHECK(r.status == MinimizeStatus::Converged);
  CHECK(r.energy < 0.0);
}

TEST_CASE("p = 5: sign change of the ground-state energy across the critical mass") {
  auto g = build_grid({5, 8});
  const auto lo = config(5.0, 2.0);
  const auto rl = minimize_energy(g, lo);
  CHECK(rl.status == MinimizeStatus::NonNegativeInfimum);
  CHECK(rl.energy >= 0.0);
  check_run_invariants(rl, lo);

  // Above the threshold a spread start can stall in the positive box mode;
  // a localized start reaches the negative-energy branch.
  auto hi = config(5.0, 8.0);
  hi.init.eps = 1.5;
  const auto rh = minimize_energy(g, hi);
  CHECK(rh.status == MinimizeStatus::Converged);
  CHECK(rh.energy < 0.0);
  check_run_invariants(rh, hi);
}

TEST_CASE("p = 6: concentration above the soliton mass, nonnegative below") {
  const double mu6 = soliton_constants().mu_R;
  auto c = config(6.0, 2.0 * mu6);
  c.init.kind = InitKind::EdgeSoliton;
  double prev = 0.0;
  for (int m : {8, 16}) {
    const auto r = minimize_energy(build_grid({3, m}), c);
    CHECK(r.status == MinimizeStatus::ConcentrationDetected);
    CHECK(r.energy < prev);
    prev = r.energy;
    check_run_invariants(r, c);
  }
  const auto low = config(6.0, 0.5 * mu6);
  const auto r = minimize_energy(build_grid({5, 8}), low);
  CHECK(r.status == MinimizeStatus::NonNegativeInfimum);
  check_run_invariants(r, low);
}

TEST_CASE("p = 4 runs are flagged as the open regime") {
  const auto r = minimize_energy(build_grid({4, 4}), config(4.0, 1.0));
  CHECK(r.open_regime);
  CHECK_FALSE(minimize_energy(build_grid({4, 4}), config(3.0, 1.0)).open_regime);
}

TEST_CASE("perturbed and provided starts") {
  auto g = build_grid({6, 4});
  auto c = config(3.0, 1.0);
  c.perturbation = 0.1;
  c.seed = 9;
  const auto a = minimize_energy(g, c);
  const auto b = minimize_energy(g, c);
  CHECK(a.energy == b.energy);
  CHECK(std::equal(a.state.values().begin(), a.state.values().end(), b.state.values().begin()));

  auto p = config(3.0, 1.0);
  p.init.kind = InitKind::Provided;
  p.init.provided = a.state;
  const auto r = minimize_energy(g, p);
  CHECK(r.energy <= a.energy + 1e-12);
  CHECK(r.iterations <= 2);

  p.init.provided = GraphFunction(build_grid({5, 4}));
  CHECK_THROWS_AS(minimize_energy(g, p), std::invalid_argument);
}

TEST_CASE("quotient ascent") {
  CHECK_THROWS_AS(maximize_quotient(build_grid({2, 4}), 3.5), std::invalid_argument);
  CHECK_THROWS_AS(maximize_quotient(build_grid({2, 4}), 6.5), std::invalid_argument);

  const double kr = soliton_constants().K_R;
  const auto k6 = maximize_quotient(build_grid({2, 32}), 6.0);
  CHECK(k6.value >= 0.9 * kr);
  CHECK(k6.value <= kr + 1e-3);
  CHECK(k6.lo <= k6.value);
  CHECK(k6.value <= k6.hi);

  QuotientConfig qc;
  qc.certification_samples = 300;
  qc.seed = 5;
  const auto k4 = maximize_quotient(build_grid({4, 8}), 4.0, qc);
  CHECK(std::isfinite(k4.value));
  CHECK(k4.value > 0.0);
  CHECK(k4.certified_samples == 300);
  CHECK(k4.best_sample_quotient <= k4.value * (1.0 + 1e-6));
  REQUIRE(k4.best_state);
  CHECK(mass(*k4.best_state) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quotient_unchecked(*k4.best_state, 4.0) == doctest::Approx(k4.value).epsilon(1e-12));
  CHECK(k4.compactness_bound > 0.0);
  CHECK(k4.nondegeneracy_bound > 0.0);

  // Degree-0 homogeneity: a scaled start ends at the same value.
  auto g = build_grid({3, 8});
  QuotientConfig single;
  single.start_eps = {};
  single.edge_soliton_start = false;
  single.certification_samples = 0;
  const auto u0 = u_eps(g, make_exp_family(0.8, 1.0), 2.0);
  single.extra_starts = {u0};
  const auto a = maximize_quotient(g, 5.0, single);
  single.extra_starts = {7.5 * u0};
  const auto b = maximize_quotient(g, 5.0, single);
  CHECK(rel_err(a.value, b.value) < 1e-6);
}

TEST_CASE("critical mass") {
  auto g = build_grid({3, 8});
  CriticalMassConfig c;
  c.kp_override = 4.0 / (std::numbers::pi * std::numbers::pi);
  const auto f6 = estimate_critical_mass(g, 6.0, EstimateMethod::Formula, c);
  CHECK(f6.value == doctest::Approx(std::numbers::pi * std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(f6.method == EstimateMethod::Formula);

  CHECK_THROWS_AS(estimate_critical_mass(g, 3.0, EstimateMethod::Formula), std::invalid_argument);
  CHECK_THROWS_AS(estimate_critical_mass(g, 6.0, EstimateMethod::EnergyBisection), std::invalid_argument);

  CriticalMassConfig b;
  b.quotient.certification_samples = 50;
  auto g5 = build_grid({5, 8});
  const auto bis = estimate_critical_mass(g5, 5.0, EstimateMethod::EnergyBisection, b);
  CHECK(bis.hi - bis.lo < 1e-2);
  CHECK(bis.lo <= bis.value);
  CHECK(bis.value <= bis.hi);
  const auto form = estimate_critical_mass(g5, 5.0, EstimateMethod::Formula, b);
  CHECK(rel_err(form.value, bis.value) < 0.05);
  CHECK(form.lo <= form.value);
  CHECK(form.value <= form.hi);

  CriticalMassConfig stuck;
  stuck.mu_start = 1e-3;
  stuck.max_expansions = 1;
  CHECK_THROWS_AS(estimate_critical_mass(g5, 5.0, EstimateMethod::EnergyBisection, stuck), ComputationError);
}

TEST_CASE("center_state") {
  auto g = build_grid({12, 4});
  const auto pr = make_exp_family(1.0, 1.0);
  const auto u = u_eps(g, pr, 2.0);
  const auto same = center_state(u);
  CHECK(std::equal(same.values().begin(), same.values().end(), u.values().begin()));

  const auto back = center_state(translate(u, 3, -2));
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(back.values()[i] - u.values()[i]));
  // Only values beyond distance L - 3 from the centre were dropped.
  CHECK(worst <= pr.kappa * std::exp(-1.0 * (12 - 3)) * 1.0001);

  // Equal peaks at (-1, 0) and (1, 0): the lexicographically smaller wins.
  auto g2 = build_grid({4, 2});
  GraphFunction two(g2);
  two.values()[g2->vertex_dof(g2->vertex_id(-1, 0))] = 1.0;
  two.values()[g2->vertex_dof(g2->vertex_id(1, 0))] = 1.0;
  const auto c = center_state(two);
  const auto expect = translate(two, 1, 0);
  CHECK(std::equal(c.values().begin(), c.values().end(), expect.values().begin()));
  CHECK_THROWS_AS(center_state(GraphFunction(g2)), std::invalid_argument);
}
