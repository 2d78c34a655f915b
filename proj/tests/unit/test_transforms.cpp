#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cliffsurf/calculus.hpp"
#include "cliffsurf/clifford.hpp"
#include "cliffsurf/transforms.hpp"
#include "cliffsurf/zoo.hpp"

using namespace cliffsurf;

TEST_CASE("spin transform by 1 reproduces f up to translation") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 64);
  const SpinTransformResult s = spin_transform(f, lambda_recipe("one", f, gauss_map(f)));
  const SurfaceGrid d = f - s.f_new;
  // Translation up to the O(h^2) path-integration error.
  const double scale = max_node_norm(f);
  for (const Multivector& x : d.values) CHECK((x - d.values[0]).norm() < 1e-2 * scale);
}

TEST_CASE("spin transform by a constant Pin element is an isometry") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 32);
  const SpinTransformResult s = spin_transform(f, lambda_recipe("pin", f, gauss_map(f)));
  const MetricField a = induced_metric(f), b = induced_metric(s.df_new);
  for (std::size_t k = 0; k < a.E.size(); ++k) {
    CHECK(std::abs(a.E[k] - b.E[k]) < 1e-10);
    CHECK(std::abs(a.F[k] - b.F[k]) < 1e-10);
    CHECK(std::abs(a.G[k] - b.G[k]) < 1e-10);
  }
  CHECK(s.grade1_defect < 1e-12);
}

TEST_CASE("spin transform rejects a non-holomorphic lambda") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 32);
  const SurfaceGrid bad = sample(3, f.shape, [](double u, double v) {
    return Multivector::scalar(3, 2.0 + std::cos(u) * v);
  });
  TransformOptions opts;
  opts.holomorphic_threshold = 1e-2;
  CHECK_THROWS_AS(spin_transform(f, bad, opts), Error);
}

TEST_CASE("conjugate surface: construction exact, recovered residual small, helicoid shape") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 64);
  const ConjugateResult c = conjugate_surface(f);
  CHECK(c.construction.max_norm < 1e-12);
  CHECK(c.recovered.max_norm < 1e-2);
  REQUIRE(c.period_u.has_value());
  // h differs from the helicoid differential pattern by a constant rotation; compare metrics.
  const MetricField a = induced_metric(f), b = induced_metric(c.h);
  double worst = 0.0;
  for (int i = 3; i < 61; ++i)
    for (int j = 3; j < 61; ++j) {
      const std::size_t k = f.shape.index(i, j);
      worst = std::max(worst, std::abs(a.E[k] - b.E[k]) / a.E[k]);
    }
  CHECK(worst < 1e-2);
}

TEST_CASE("conjugate surface needs a minimal input") {
  CHECK_THROWS_AS(conjugate_surface(generate(SurfaceKind::RoundSphere, 32)), Error);
}

TEST_CASE("right and left Darboux transforms of the catenoid with lambda = N") {
  for (Side side : {Side::Right, Side::Left}) {
    std::vector<double> v;
    for (int n : {32, 64, 128}) {
      const SurfaceGrid f = generate(SurfaceKind::Catenoid, n);
      const SurfaceGrid N = gauss_map(f);
      v.push_back(darboux(f, N, lambda_recipe("N", f, N), side).defining.max_norm);
    }
    CHECK(v[0] / v[1] > 3.2);
    CHECK(v[1] / v[2] > 3.2);
    CHECK(v[1] / v[2] < 4.8);
  }
}

TEST_CASE("Darboux transform with a non-commuting lambda fails the wedge check") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 32);
  const SurfaceGrid N = gauss_map(f);
  const SurfaceGrid bad = sample(3, f.shape, [](double u, double v) {
    return Multivector::vector(3, {1.0 + v * v, std::sin(u), 0.5});
  });
  DarbouxOptions opts;
  opts.wedge_threshold = 1e-2;
  CHECK_THROWS_AS(darboux(f, N, bad, Side::Right, opts), Error);
}

TEST_CASE("g# = f# lambda is a right Darboux transform of g") {
  const SurfaceGrid f = generate(SurfaceKind::CliffordTorus, 64);
  const SurfaceGrid N = gauss_map(f);
  const SurfaceGrid lam = lambda_recipe("fN", f, N);
  const DarbouxResult d = darboux(f, N, lam, Side::Right);
  const SurfaceGrid gs = d.f_sharp * lam;
  const SurfaceGrid diff = gs - (d.g + f * lam);
  CHECK(max_node_norm(diff) < 1e-12 * max_node_norm(gs));
}

TEST_CASE("Darboux connection is flat and a perturbed T is not") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 64);
  const SurfaceGrid N = gauss_map(f);
  const DarbouxResult d = darboux(f, N, lambda_recipe("N", f, N), Side::Right);
  const double flat = darboux_connection_residual(d.f_sharp, d.T, Side::Right).max_norm;
  CHECK(flat < 5e-3);
  SurfaceGrid T = d.T;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) T.at(i, j) += Multivector::scalar(3, 0.3 * std::sin(f.shape.v(j)));
  CHECK(darboux_connection_residual(d.f_sharp, T, Side::Right).max_norm > 10.0 * flat);
}

TEST_CASE("two-sided Darboux of the plane: T = hN collapses f, a constant T flips N") {
  const SurfaceGrid f = generate(SurfaceKind::Plane, 16);
  const SurfaceGrid N = gauss_map(f);
  // dT = dh N = df N^2 = -df.
  const DarbouxResult d = darboux_two_sided(f, N, conjugate_darboux_T(conjugate_surface(f).h, N));
  CHECK(max_node_norm(differential(d.f_sharp)) < 1e-12);
  const SurfaceGrid shift = SurfaceGrid::constant(3, f.shape, Multivector::blade(3, 0b100));
  CHECK(darboux_two_sided(f, N, shift).defining.max_norm > 1.0);
}

TEST_CASE("isothermic dual: minimal f with its Gauss map; plane with itself") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 64);
  CHECK(isothermic_dual_residual(f, gauss_map(f)).max_norm < 1e-2);
  const SurfaceGrid p = generate(SurfaceKind::Plane, 16);
  CHECK(isothermic_dual_residual(p, gauss_map(p)).max_norm == 0.0);
}

TEST_CASE("permutability with lambda1 = lambda0 + c: chi = -1 and an exact relation") {
  const SurfaceGrid f = generate(SurfaceKind::CliffordTorus, 32);
  const SurfaceGrid N = gauss_map(f);
  const PermutabilityResult p = permutability_check(f, N, lambda_recipe("fN", f, N),
                                                    lambda_recipe("fN+c", f, N), Side::Right);
  for (const Multivector& x : p.chi.values) CHECK((x + Multivector::scalar(4, 1.0)).max_abs() < 1e-9);
  CHECK(p.relation.max_norm < 1e-10);
}

TEST_CASE("permutability with identical lambdas makes the second step singular") {
  const SurfaceGrid f = generate(SurfaceKind::CliffordTorus, 16);
  const SurfaceGrid N = gauss_map(f);
  const SurfaceGrid l = lambda_recipe("fN", f, N);
  CHECK_THROWS_AS(permutability_check(f, N, l, l, Side::Right), Error);
}

TEST_CASE("unknown lambda recipe") {
  const SurfaceGrid f = generate(SurfaceKind::Plane, 16);
  CHECK_THROWS_AS(lambda_recipe("nope", f, gauss_map(f)), Error);
}
