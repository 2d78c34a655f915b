#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "cliffsurf/errors.hpp"

namespace cliffsurf {

inline constexpr int kMinDimension = 3;
inline constexpr int kMaxDimension = 16;
inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultPrune = 1e-14;

using Mask = std::uint32_t;

// Basis blade e_{i1}...e_{ik} (i1 < ... < ik); bit i set means e_{i+1} is a factor.
struct BladeIndex {
  Mask mask = 0;

  constexpr int grade() const noexcept { return std::popcount(mask); }
  friend constexpr bool operator==(BladeIndex, BladeIndex) = default;
};

struct Term {
  Mask mask;
  double coeff;
};

// Sign of e_a * e_b in Cl(V_r) with e_i^2 = -1. The product blade is a ^ b.
constexpr int blade_sign(Mask a, Mask b) noexcept {
  int swaps = 0;
  for (Mask x = a >> 1; x != 0; x >>= 1) swaps += std::popcount(x & b);
  swaps += std::popcount(a & b);  // each repeated e_i contributes e_i^2 = -1
  return (swaps & 1) ? -1 : 1;
}

// (-1)^k and (-1)^{k(k-1)/2}
constexpr int grade_involution_sign(int k) noexcept { return (k & 1) ? -1 : 1; }
constexpr int reversion_sign(int k) noexcept { return ((k * (k - 1) / 2) & 1) ? -1 : 1; }

// Element of Cl(V_r) stored as a mask-sorted sparse coefficient list.
// Exact zeros are never stored; small coefficients are only removed by pruned().
class Multivector {
 public:
  using Storage = boost::container::small_vector<Term, 16>;

  Multivector() : Multivector(kMinDimension) {}
  explicit Multivector(int r, double tol = kDefaultTol);

  static Multivector scalar(int r, double value);
  static Multivector blade(int r, Mask mask, double coeff = 1.0);
  // sum_i comps[i] e_{i+1}
  static Multivector vector(int r, std::span<const double> comps);
  static Multivector vector(int r, std::initializer_list<double> comps);
  // Sorts, merges duplicate masks and drops exact zeros.
  static Multivector from_terms(int r, std::vector<Term> terms, double tol = kDefaultTol);

  // Terms must already be mask-sorted, unique and nonzero.
  static Multivector from_sorted(int r, double tol, Storage terms);

  int r() const noexcept { return r_; }
  double tol() const noexcept { return tol_; }
  Multivector with_tol(double tol) const;

  std::span<const Term> terms() const noexcept { return {terms_.data(), terms_.size()}; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  double coeff(Mask mask) const noexcept;
  double scalar_part() const noexcept { return coeff(0); }
  // Largest absolute coefficient.
  double max_abs() const noexcept;
  // Euclidean norm of the coefficient vector, i.e. sqrt of quad_form.
  double norm() const noexcept;
  // True when every stored term has this grade.
  bool is_pure_grade(int k) const noexcept;
  // Norm of everything outside grade k.
  double norm_outside_grade(int k) const noexcept;

  Multivector pruned(double threshold) const;

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(double s);
  Multivector& operator/=(double s);

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  friend Multivector operator/(Multivector a, double s) { return a /= s; }
  // Geometric product.
  friend Multivector operator*(const Multivector& a, const Multivector& b);

  // Adds s to the scalar part.
  Multivector plus_scalar(double s) const;

  std::string to_string() const;

 private:
  void check_same_r(const Multivector& other, const char* op) const;
  void combine(const Multivector& other, double sign);

  int r_;
  double tol_;
  Storage terms_;
};

Multivector geometric_product(const Multivector& a, const Multivector& b);

// Plumbing for constructing algebra elements with shared settings.
struct AlgebraContext {
  int r = kMinDimension;
  double tol = kDefaultTol;
  double prune = kDefaultPrune;

  AlgebraContext() = default;
  AlgebraContext(int r_, double tol_ = kDefaultTol, double prune_ = kDefaultPrune);

  Multivector zero() const { return Multivector(r, tol); }
  Multivector scalar(double s) const { return Multivector::scalar(r, s).with_tol(tol); }
  Multivector e(int i) const { return Multivector::blade(r, Mask{1} << (i - 1)).with_tol(tol); }
  Multivector blade(Mask m, double c = 1.0) const {
    return Multivector::blade(r, m, c).with_tol(tol);
  }
  Multivector vector(std::span<const double> comps) const {
    return Multivector::vector(r, comps).with_tol(tol);
  }
  Multivector clean(const Multivector& a) const { return a.pruned(prune); }
};

void check_dimension(int r);

}  // namespace cliffsurf
