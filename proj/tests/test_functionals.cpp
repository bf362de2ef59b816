#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
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

GraphFunction with_mass(GraphFunction u, double mu) {
  u *= std::sqrt(mu / mass(u));
  return u;
}

double dot(const GraphFunction& a, const GraphFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.values()[i] * b.values()[i];
  return s;
}

InequalityParams at(double p, double alpha = 0.0) {
  InequalityParams ip;
  ip.p = p;
  ip.alpha = alpha;
  return ip;
}

}  // namespace

TEST_CASE("energy: values and exponent window") {
  auto g = build_grid({2, 8});
  CHECK(energy(GraphFunction(g), 4.0).energy == 0.0);
  const auto e = energy(testing::tent(g), 4.0);
  CHECK(e.energy == doctest::Approx(0.496875).epsilon(1e-13));
  CHECK(e.energy == 0.5 * e.kinetic - e.potential_p / 4.0);
  CHECK_THROWS_AS(energy(testing::tent(g), 2.0), std::invalid_argument);
  try {
    energy(testing::tent(g), 6.5);
    FAIL("p > 6 accepted");
  } catch (const std::invalid_argument& ex) {
    CHECK(std::string(ex.what()).find("scaling") != std::string::npos);
  }
}

TEST_CASE("small-eps exponential family has negative energy for p = 3") {
  auto g = build_grid({40, 4});
  for (double eps : {0.1, 0.2}) {
    const auto u = u_eps(g, make_exp_family(eps, 1.0), 1e-3);
    CHECK(energy(u, 3.0).energy < 0.0);
  }
}

TEST_CASE("gradient: zero, stencil, finite differences") {
  auto g = build_grid({2, 4});
  CHECK(energy_gradient(GraphFunction(g), 5.0).is_zero());

  // Half the kinetic gradient of the m = 4 tent, from the 3-point stencil by
  // hand: node 2 (peak) gets (2*0.5 - 0.25 - 0.25)/0.25 = 2, the two end
  // vertices get (0 - 0.25)/0.25 = -1, everything else 0.
  const auto t = testing::tent(g);
  std::vector<double> kin(g->num_dofs(), 0.0);
  kernels::kinetic_gradient(*g, t.values(), kin);
  const int e = g->edge_id(0, 0, Orientation::Horizontal);
  const auto nodes = g->edge_nodes(e);
  for (std::size_t d = 0; d < kin.size(); ++d) {
    double expected = 0.0;
    if (static_cast<int>(d) == nodes[2]) expected = 2.0;
    if (static_cast<int>(d) == nodes[0] || static_cast<int>(d) == nodes[4]) expected = -1.0;
    CHECK(0.5 * kin[d] == doctest::Approx(expected).epsilon(1e-14));
  }

  auto gg = build_grid({2, 5});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (double p : {3.0, 4.5, 6.0}) {
    for (int s = 0; s < 4; ++s) {
      const auto u = random_function(gg, rng);
      const auto grad = energy_gradient(u, p);
      for (int k = 0; k < 20; ++k) {
        GraphFunction v(gg);
        for (auto& x : v.values()) x = unit(rng);
        const double an = dot(grad, v);
        const double fd = (energy(u + h * v, p).energy - energy(u - h * v, p).energy) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - an) / std::abs(an));
      }
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("quotient: tent value, homogeneity, translation, degeneracy") {
  auto g = build_grid({3, 8});
  CHECK(gn_quotient(testing::tent(g), 4.0).value == doctest::Approx(0.15).epsilon(1e-13));
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const auto u = random_function(g, rng);
    for (double p : {4.0, 5.0, 6.0}) {
      CHECK(rel_err(gn_quotient(2.0 * u, p).value, gn_quotient(u, p).value) < 1e-12);
      CHECK(rel_err(gn_quotient(-0.3 * u, p).value, gn_quotient(u, p).value) < 1e-12);
    }
  }
  const auto t = testing::tent(g);
  CHECK(rel_err(gn_quotient(translate(t, -1, 1), 5.0).value, gn_quotient(t, 5.0).value) < 1e-14);
  CHECK_THROWS_AS(gn_quotient(GraphFunction(g), 5.0), std::invalid_argument);
  CHECK_THROWS_AS(gn_quotient(t, 3.0), std::invalid_argument);
}

TEST_CASE("Sobolev2D on the tent") {
  auto g = build_grid({2, 8});
  const auto r = check_inequality(testing::tent(g), InequalityKind::Sobolev2D);
  CHECK(r.lhs == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-13));
  CHECK(r.rhs == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(r.slack > 0.0);
}

TEST_CASE("all inequalities hold on random samples") {
  auto g = build_grid({3, 4});
  std::mt19937_64 rng(13);
  int reports = 0;
  for (int i = 0; i < 300; ++i) {
    const auto u = random_function(g, rng);
    CHECK(!check_inequality(u, InequalityKind::GNInfty).violated());
    CHECK(!check_inequality(u, InequalityKind::Sobolev2D).violated());
    reports += 2;
    for (double p : {4.0, 5.0, 6.0}) {
      CHECK(!check_inequality(u, InequalityKind::GN1D, at(p)).violated());
      CHECK(!check_inequality(u, InequalityKind::GN2D, at(p)).violated());
      CHECK(!check_inequality(u, InequalityKind::GNCritical, at(p)).violated());
      const auto [lo, hi] = interdimensional_alpha_range(p);
      for (int k = 0; k < 5; ++k) {
        CHECK(!check_inequality(u, InequalityKind::Interdimensional, at(p, lo + (hi - lo) * k / 4.0)).violated());
      }
      reports += 8;
    }
  }
  CHECK(reports == 300 * 26);
}

TEST_CASE("interdimensional endpoints reduce to the 1D and 2D reports") {
  auto g = build_grid({3, 4});
  std::mt19937_64 rng(14);
  for (int i = 0; i < 20; ++i) {
    const auto u = random_function(g, rng);
    for (double p : {4.0, 5.5, 6.0}) {
      const auto [lo, hi] = interdimensional_alpha_range(p);
      const auto a = check_inequality(u, InequalityKind::Interdimensional, at(p, lo));
      const auto b = check_inequality(u, InequalityKind::GN1D, at(p));
      CHECK(rel_err(a.lhs, b.lhs) < 1e-12);
      CHECK(rel_err(a.rhs / a.constant, b.rhs / b.constant) < 1e-12);
      const auto c = check_inequality(u, InequalityKind::Interdimensional, at(p, hi));
      const auto d = check_inequality(u, InequalityKind::GN2D, at(p));
      CHECK(rel_err(c.lhs, d.lhs) < 1e-12);
      CHECK(rel_err(c.rhs / c.constant, d.rhs / d.constant) < 1e-12);
    }
  }
  const auto u = random_function(g, rng);
  CHECK_THROWS_AS(check_inequality(u, InequalityKind::Interdimensional, at(5.0, 0.1)), std::invalid_argument);
  CHECK_THROWS_AS(check_inequality(u, InequalityKind::Interdimensional, at(5.0, 0.61)), std::invalid_argument);
}

TEST_CASE("GN1D slack shrinks as a half-edge spike sharpens") {
  // Tent of height 1 on [0, w]: both sides scale like w^{1/4} at p = 4.
  const int m = 64;
  auto g = build_grid({1, m});
  const int e = g->edge_id(0, 0, Orientation::Horizontal);
  double prev = std::numeric_limits<double>::infinity();
  for (double w : {0.5, 0.25, 0.125, 0.0625, 0.03125}) {
    const auto prof = testing::sample_profile(m, [&](double s) { return s < w ? 1.0 - std::abs(2.0 * s / w - 1.0) : 0.0; });
    const auto r = check_inequality(embed_edge_function(g, e, prof), InequalityKind::GN1D, at(4.0));
    CHECK(r.slack > 0.0);
    CHECK(r.slack < prev);
    prev = r.slack;
  }
}

TEST_CASE("energy identity and lower bound") {
  auto g = build_grid({3, 4});
  std::mt19937_64 rng(15);
  for (int i = 0; i < 100; ++i) {
    const auto u = with_mass(random_function(g, rng), 1.0);
    const auto id = energy_identity_check(u, 5.0, 1.0);
    CHECK(rel_err(id.identity, id.direct) < 1e-12);
  }

  // With K = (3/2)^5 (an upper bound for every quotient by the critical
  // inequality) the mass 0.4 lies below the implied critical mass.
  const double k = critical_gn_constant(5.0);
  REQUIRE(critical_mass_from_constant(5.0, k) > 0.4);
  for (int i = 0; i < 50; ++i) {
    const auto u = with_mass(random_function(g, rng), 0.4);
    const auto id = energy_identity_check(u, 5.0, 0.4, k);
    REQUIRE(id.lower_bound);
    CHECK(*id.lower_bound >= 0.0);
    CHECK(id.direct >= *id.lower_bound - 1e-14);
  }

  // Near-maximizer of Q_5 above the estimated critical mass: negative energy.
  auto small = build_grid({3, 8});
  QuotientConfig qc;
  qc.certification_samples = 20;
  const auto kp = maximize_quotient(small, 5.0, qc);
  const double mu = 1.1 * critical_mass_from_constant(5.0, kp.value);
  const auto u = with_mass(*kp.best_state, mu);
  CHECK(energy_identity_check(u, 5.0, mu, kp.value).identity < 0.0);

  CHECK_THROWS_AS(energy_identity_check(u, 5.0, 2.0 * mu), std::invalid_argument);
}
