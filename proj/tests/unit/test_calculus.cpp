#include <doctest.h>

#include <cmath>

#include "cliffsurf/calculus.hpp"
#include "cliffsurf/clifford.hpp"
#include "cliffsurf/study.hpp"
#include "cliffsurf/zoo.hpp"

using namespace cliffsurf;

namespace {

double check_at(const std::string& check, const std::string& surface, int n) {
  return run_check(check, surface, n);
}

void expect_second_order(const std::string& check, const std::string& surface,
                         std::vector<int> grids = {32, 64, 128}) {
  std::vector<double> v;
  for (int n : grids) v.push_back(check_at(check, surface, n));
  const ConvergenceStudy s = classify_convergence(surface, check, grids, v);
  INFO(check << " on " << surface << ": " << v[0] << " " << v[1] << " " << v[2]);
  CHECK(s.pass);
}

}  // namespace

TEST_CASE("grids need three nodes per axis and matching shapes") {
  const GridShape s = make_shape(2, 8, {0, 1, 0, 1}, false, false);
  const SurfaceGrid f(3, s);
  CHECK_THROWS_AS(differential(f), Error);
  CHECK_THROWS_AS(generate(SurfaceKind::Plane, 4), Error);
  const SurfaceGrid a = generate(SurfaceKind::Plane, 8), b = generate(SurfaceKind::Plane, 9);
  CHECK_THROWS_AS(a + b, Error);
}

TEST_CASE("hodge star squares to -1") {
  const SurfaceGrid f = generate(SurfaceKind::Graph, 32);
  const OneFormField df = differential(f);
  const OneFormField ss = hodge_star(hodge_star(df, f), f);
  CHECK(max_node_norm(ss + df) < 1e-12 * max_node_norm(df));
}

TEST_CASE("plane: Gauss map e1e2 and zero residuals") {
  const SurfaceGrid f = generate(SurfaceKind::Plane, 16);
  const SurfaceGrid N = gauss_map(f);
  for (const Multivector& x : N.values) CHECK((x - Multivector::blade(3, 0b011)).max_abs() < 1e-12);
  CHECK(conformality_residual(f, N).max_norm < 1e-12);
  CHECK(hopf_report(f, N).max_norm < 1e-12);
}

TEST_CASE("sheared plane is not conformal at any resolution") {
  for (int n : {16, 64}) {
    const SurfaceGrid f = sheared_plane(n, n);
    CHECK(conformality_residual(f, SurfaceGrid::constant(3, f.shape, Multivector::blade(3, 0b011)))
              .max_norm > 0.3);
  }
}

TEST_CASE("Gauss map needs vector-valued differentials") {
  const SurfaceGrid f = gauss_map(generate(SurfaceKind::Catenoid, 16));
  CHECK_THROWS_AS(gauss_map(f), Error);
}

TEST_CASE("second-order residual decay on generator surfaces") {
  expect_second_order("conformality", "catenoid");
  expect_second_order("hopf", "catenoid");
  expect_second_order("mcv", "catenoid");
  expect_second_order("mcv", "round_sphere");
  expect_second_order("conformality", "lawson");
  expect_second_order("harmonicity", "lawson");
  expect_second_order("conformality", "clifford_torus");
  expect_second_order("harmonicity", "clifford_torus");
  expect_second_order("conformality", "graph");
}

TEST_CASE("round sphere is not minimal") {
  const SurfaceGrid f = generate(SurfaceKind::RoundSphere, 64);
  CHECK(hopf_report(f, gauss_map(f)).max_norm > 0.1);
}

TEST_CASE("non-harmonic controls stay away from zero") {
  const double harmonic = check_at("harmonicity", "clifford_torus", 64);
  CHECK(check_at("harmonicity", "perturbed_torus", 64) > 10.0 * std::max(harmonic, 1e-12));
  ResidualOptions opts;
  opts.degenerate_tol = -1.0;
  CHECK(harmonicity_residual(curve_sweep(64, 64), opts).max_norm > 1e-2);
}

TEST_CASE("harmonicity needs a sphere-valued map") {
  CHECK_THROWS_AS(harmonicity_residual(generate(SurfaceKind::Plane, 16)), Error);
}

TEST_CASE("holomorphic residual: f is D^N-holomorphic, not for -N") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 64);
  const SurfaceGrid N = gauss_map(f);
  const double good = holomorphic_residual(f, N, Side::Left).max_norm;
  const double bad = holomorphic_residual(f, -1.0 * N, Side::Left).max_norm;
  CHECK(good < 1e-2);
  CHECK(bad > 0.1);
}

TEST_CASE("Phi of the catenoid Gauss map satisfies *Phi = N Phi") {
  const SurfaceGrid N = gauss_map(generate(SurfaceKind::Catenoid, 64));
  const auto [phi, phit] = phi_fields(N);
  const OneFormField r = hodge_star(phi, N) - N * phi;
  CHECK(max_node_norm(r) < 1e-2);
}

TEST_CASE("integrate_potential recovers a vector potential and rejects non-closed forms") {
  const SurfaceGrid f = generate(SurfaceKind::Graph, 32);
  const Potential p = integrate_potential(differential(f));
  const SurfaceGrid back = f - p.g;
  double spread = 0.0;
  for (const Multivector& x : back.values) spread = std::max(spread, (x - back.values[0]).norm());
  CHECK(spread < 1e-2);
  const GridShape s = make_shape(32, 32, {0, 1, 0, 1}, false, false);
  OneFormField w(3, s);
  for (std::size_t k = 0; k < s.size(); ++k) {
    w.u[k] = Multivector::vector(3, {0.0, 0.0, 0.0});
    w.v[k] = Multivector::vector(3, {s.u(static_cast<int>(k / 32)), 0.0, 0.0});
  }
  CHECK_THROWS_AS(integrate_potential(w), Error);
}

TEST_CASE("catenoid conjugate form has a period on the u loop") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 64);
  const Potential p = integrate_potential(-1.0 * hodge_star(differential(f), f));
  REQUIRE(p.period_u.has_value());
  CHECK(std::abs(std::abs(p.period_u->coeff(0b100)) - 2.0 * M_PI) < 1e-2);
  CHECK_FALSE(p.g.shape.periodic_u);
}
