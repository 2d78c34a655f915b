#include "cliffsurf/properties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "cliffsurf/clifford.hpp"

namespace cliffsurf {

namespace {

double uniform(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

double rel(const Multivector& got, const Multivector& want) {
  return (got - want).max_abs() / std::max(1.0, want.max_abs());
}

// Dimension of the fixed space of an r x r action matrix.
int fixed_dimension(const std::vector<double>& m, int r) {
  Eigen::MatrixXd A(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) A(i, j) = m[static_cast<std::size_t>(i * r + j)];
  A -= Eigen::MatrixXd::Identity(r, r);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-9);
  return r - static_cast<int>(lu.rank());
}

struct Family {
  std::string name;
  double tol;
  std::function<double(std::mt19937_64&)> trial;
};

}  // namespace

Multivector random_multivector(int r, std::mt19937_64& rng) {
  std::vector<Term> terms;
  for (Mask m = 0; m < (Mask{1} << r); ++m) terms.push_back({m, uniform(rng)});
  return Multivector::from_terms(r, std::move(terms));
}

Multivector random_vector(int r, std::mt19937_64& rng) {
  std::vector<double> c(static_cast<std::size_t>(r));
  for (double& x : c) x = uniform(rng);
  return Multivector::vector(r, c);
}

Multivector random_unit_vector(int r, std::mt19937_64& rng) {
  for (;;) {
    Multivector v = random_vector(r, rng);
    const double n = v.norm();
    if (n > 0.1) return v / n;
  }
}

Multivector random_versor(int r, int factors, std::mt19937_64& rng) {
  Multivector x = Multivector::scalar(r, 1.0);
  for (int k = 0; k < factors; ++k) x = x * random_unit_vector(r, rng);
  return x;
}

std::vector<PropertyResult> algebra_property_suite(int r, int trials, std::uint64_t seed) {
  if (r < kMinDimension || r > 10) {
    throw Error(ErrorCode::OutOfRange, "property suite supports 3 <= r <= 10");
  }
  if (trials < 1) throw Error(ErrorCode::OutOfRange, "trials must be positive");
  const Multivector one = Multivector::scalar(r, 1.0);

  std::vector<Family> families = {
      {"associativity", 1e-12,
       [&](std::mt19937_64& g) {
         const Multivector a = random_multivector(r, g), b = random_multivector(r, g),
                           c = random_multivector(r, g);
         return rel((a * b) * c, a * (b * c));
       }},
      {"vector_square", 1e-12,
       [&](std::mt19937_64& g) {
         const Multivector v = random_vector(r, g);
         return rel(v * v, Multivector::scalar(r, -quad_form(v)));
       }},
      {"orthogonal_anticommute", 1e-12,
       [&](std::mt19937_64& g) {
         const Multivector u = random_unit_vector(r, g);
         Multivector v = random_vector(r, g);
         v -= u * inner(u, v);
         return rel(u * v + v * u, Multivector(r));
       }},
      {"reversion_antiautomorphism", 1e-12,
       [&](std::mt19937_64& g) {
         const Multivector a = random_multivector(r, g), b = random_multivector(r, g);
         return rel(reversion(a * b), reversion(b) * reversion(a));
       }},
      {"grade_involution", 1e-12,
       [&](std::mt19937_64& g) {
         const Multivector a = random_multivector(r, g), b = random_multivector(r, g);
         return std::max(rel(grade_involution(a * b), grade_involution(a) * grade_involution(b)),
                         rel(grade_involution(grade_involution(a)), a));
       }},
      {"norm_map_on_vectors", 1e-12,
       [&](std::mt19937_64& g) {
         const Multivector v = random_vector(r, g);
         return rel(norm_map(v), Multivector::scalar(r, quad_form(v)));
       }},
      {"quad_form_sum_of_squares", 1e-12,
       [&](std::mt19937_64& g) {
         const Multivector a = random_multivector(r, g);
         double s = 0.0;
         for (const Term& t : a.terms()) s += t.coeff * t.coeff;
         return std::abs(quad_form(a) - s) / std::max(1.0, s);
       }},
      {"volume_form_square", 1e-12,
       [&](std::mt19937_64&) {
         double worst = 0.0;
         for (int n = 2; n <= r; ++n) {
           const Multivector w = volume_form(n, r);
           const double want = ((n * (n + 1) / 2) % 2 == 0) ? 1.0 : -1.0;
           worst = std::max(worst, rel(w * w, Multivector::scalar(r, want)));
         }
         return worst;
       }},
      {"general_inverse", 1e-9,
       [&](std::mt19937_64& g) {
         const Multivector a = random_multivector(r, g);
         const auto inv = try_inverse(a);
         if (!inv) return 0.0;  // measure-zero singular draw
         return std::max(rel(a * *inv, one), rel(*inv * a, one));
       }},
      {"reflection", 1e-9,
       [&](std::mt19937_64& g) {
         const Multivector n = random_unit_vector(r, g);
         const Multivector v = random_vector(r, g);
         const Multivector w = twisted_adjoint(n, v);
         double err = std::max(w.norm_outside_grade(1),
                               std::abs(quad_form(w) - quad_form(v)) / std::max(1.0, quad_form(v)));
         const auto m = vector_action_matrix(n, true);
         err = std::max(err, std::abs(determinant(m, r) + 1.0));
         if (fixed_dimension(m, r) != r - 1) err = 1.0;
         return err;
       }},
      {"rotation", 1e-9,
       [&](std::mt19937_64& g) {
         const Multivector x = random_versor(r, 2 * (1 + static_cast<int>(g() % 3)), g);
         const Multivector v = random_vector(r, g);
         const Multivector w = adjoint(x, v);
         double err = std::max(w.norm_outside_grade(1),
                               std::abs(quad_form(w) - quad_form(v)) / std::max(1.0, quad_form(v)));
         err = std::max(err, std::abs(determinant(vector_action_matrix(x, false), r) - 1.0));
         return err;
       }},
  };

  std::vector<PropertyResult> out;
  for (std::size_t f = 0; f < families.size(); ++f) {
    // Each family draws from its own stream so adding one does not shift the others.
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (f + 1));
    PropertyResult res{families[f].name, trials, 0.0, families[f].tol, false};
    for (int t = 0; t < trials; ++t) res.worst = std::max(res.worst, families[f].trial(rng));
    res.pass = res.worst <= res.tol;
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace cliffsurf
