#include <doctest.h>

#include <random>

#include "cliffsurf/clifford.hpp"
#include "cliffsurf/properties.hpp"

using namespace cliffsurf;

namespace {
Multivector e(int r, int i) { return Multivector::blade(r, Mask{1} << (i - 1)); }
}  // namespace

TEST_CASE("generators square to -1 and anticommute") {
  const int r = 4;
  for (int i = 1; i <= r; ++i) {
    CHECK((e(r, i) * e(r, i)).scalar_part() == -1.0);
    for (int j = i + 1; j <= r; ++j) CHECK((e(r, i) * e(r, j) + e(r, j) * e(r, i)).is_zero());
  }
}

TEST_CASE("construction rejects bad dimensions and masks") {
  CHECK_THROWS_AS(Multivector(2), Error);
  CHECK_THROWS_AS(Multivector(17), Error);
  CHECK_THROWS_AS(Multivector::blade(3, 0b1000), Error);
  CHECK_THROWS_AS(Multivector(3) + Multivector(4), Error);
}

TEST_CASE("conjugate signs by grade") {
  const int r = 4;
  const double want[] = {1, -1, -1, 1, 1};
  for (Mask m = 0; m < 16; ++m) {
    CHECK(conjugate(Multivector::blade(r, m)).coeff(m) == want[std::popcount(m)]);
  }
}

TEST_CASE("norm map is Q on vectors and quad_form is the coefficient sum of squares") {
  const Multivector v = Multivector::vector(3, {1.0, 2.0, -2.0});
  CHECK(norm_map(v).scalar_part() == doctest::Approx(9.0));
  CHECK(quad_form(v) == doctest::Approx(9.0));
  CHECK(inner(v, v) == doctest::Approx(9.0));
}

TEST_CASE("inverse_in_E on vectors and bivectors, failure on zero divisors") {
  const Multivector v = Multivector::vector(3, {1.0, 2.0, 0.5});
  CHECK((v * inverse_in_E(v) - Multivector::scalar(3, 1.0)).max_abs() < 1e-14);
  const Multivector b = Multivector::blade(4, 0b0011) * 2.0 + Multivector::blade(4, 0b1100);
  CHECK((b * inverse(b) - Multivector::scalar(4, 1.0)).max_abs() < 1e-12);
  // (1 + e1e2e3e4)/2 is idempotent in Cl(V_4) and has no inverse.
  const Multivector p = (Multivector::scalar(4, 1.0) + Multivector::blade(4, 0b1111)) * 0.5;
  CHECK((p * p - p).max_abs() < 1e-15);
  CHECK_FALSE(try_inverse(p).has_value());
  CHECK_THROWS_AS(inverse_in_E(p), Error);
}

TEST_CASE("volume forms square to (-1)^{n(n+1)/2}") {
  CHECK((volume_form(2, 4) * volume_form(2, 4)).scalar_part() == -1.0);
  CHECK((volume_form(3, 4) * volume_form(3, 4)).scalar_part() == 1.0);
  CHECK((volume_form(4, 4) * volume_form(4, 4)).scalar_part() == 1.0);
}

TEST_CASE("membership predicates") {
  const Multivector e12 = Multivector::blade(4, 0b0011);
  CHECK(membership(e12, MemberKind::J));
  CHECK(membership(e12, MemberKind::M_n, 2));
  CHECK(membership(e12, MemberKind::Spin));
  CHECK(membership(e(4, 1), MemberKind::Pin));
  CHECK_FALSE(membership(e(4, 1), MemberKind::Spin));
  CHECK_FALSE(membership(Multivector::scalar(4, 2.0), MemberKind::Pin));
}

TEST_CASE("twisted adjoint by e1 reflects e1 and fixes e2") {
  const int r = 3;
  CHECK((twisted_adjoint(e(r, 1), e(r, 1)) + e(r, 1)).is_zero());
  CHECK((twisted_adjoint(e(r, 1), e(r, 2)) - e(r, 2)).is_zero());
  CHECK(determinant(vector_action_matrix(e(r, 1), true), r) == doctest::Approx(-1.0));
}

TEST_CASE("seeded property suite passes for r = 3..6") {
  for (int r = 3; r <= 6; ++r) {
    for (const PropertyResult& p : algebra_property_suite(r, 200, 1234 + r)) {
      INFO(p.name << " r=" << r << " worst=" << p.worst);
      CHECK(p.pass);
    }
  }
}

TEST_CASE("property suite is reproducible for a fixed seed") {
  const auto a = algebra_property_suite(4, 50, 99);
  const auto b = algebra_property_suite(4, 50, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].worst == b[k].worst);
}

TEST_CASE("Spin elements rotate: quad_form preserved, determinant +1") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Multivector x = random_versor(5, 4, rng);
    CHECK(membership(x, MemberKind::Spin));
    const Multivector v = random_vector(5, rng);
    CHECK(quad_form(adjoint(x, v)) == doctest::Approx(quad_form(v)).epsilon(1e-12));
    CHECK(determinant(vector_action_matrix(x, false), 5) == doctest::Approx(1.0));
  }
}
