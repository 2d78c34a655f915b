#include "cliffsurf/clifford.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace cliffsurf {

namespace {

template <class SignFn>
Multivector map_signs(const Multivector& a, SignFn sign_of_grade) {
  Multivector::Storage out;
  out.reserve(a.size());
  for (const Term& t : a.terms()) {
    out.push_back({t.mask, sign_of_grade(std::popcount(t.mask)) * t.coeff});
  }
  return Multivector::from_sorted(a.r(), a.tol(), std::move(out));
}

int conjugation_sign(int k) { return grade_involution_sign(k) * reversion_sign(k); }

}  // namespace

Multivector grade_project(const Multivector& a, int k) {
  if (k < 0 || k > a.r()) {
    throw Error(ErrorCode::OutOfRange, "grade " + std::to_string(k) + " outside [0, r]");
  }
  Multivector::Storage out;
  for (const Term& t : a.terms()) {
    if (std::popcount(t.mask) == k) out.push_back(t);
  }
  return Multivector::from_sorted(a.r(), a.tol(), std::move(out));
}

Multivector grade_involution(const Multivector& a) { return map_signs(a, grade_involution_sign); }

Multivector reversion(const Multivector& a) { return map_signs(a, reversion_sign); }

Multivector conjugate(const Multivector& a) { return map_signs(a, conjugation_sign); }

Multivector norm_map(const Multivector& a) { return conjugate(a) * a; }

double quad_form(const Multivector& a) {
  // <alpha(e_A)^T e_B>_0 = delta_AB, so only diagonal terms survive.
  double s = 0.0;
  for (const Term& t : a.terms()) s += t.coeff * t.coeff;
  return s;
}

double inner(const Multivector& a, const Multivector& b) {
  if (a.r() != b.r()) throw Error(ErrorCode::DimensionMismatch, "inner: r mismatch");
  double s = 0.0;
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    if (ia->mask < ib->mask) {
      ++ia;
    } else if (ib->mask < ia->mask) {
      ++ib;
    } else {
      s += ia->coeff * ib->coeff;
      ++ia;
      ++ib;
    }
  }
  return s;
}

std::optional<Multivector> try_inverse_in_E(const Multivector& a) {
  const Multivector n = norm_map(a);
  const double q = n.scalar_part();
  const double tol = a.tol();
  if (q <= tol) return std::nullopt;
  if ((n - Multivector::scalar(a.r(), q)).max_abs() > tol * std::max(1.0, q)) return std::nullopt;
  return conjugate(a) / q;
}

Multivector inverse_in_E(const Multivector& a) {
  auto inv = try_inverse_in_E(a);
  if (!inv) {
    throw Error(ErrorCode::NotInvertible, "element is not in E^x: " + a.to_string());
  }
  return *inv;
}

std::optional<Multivector> try_inverse(const Multivector& a) {
  if (auto inv = try_inverse_in_E(a)) return inv;
  const int r = a.r();
  if (r > 10) return std::nullopt;
  const int n = 1 << r;
  // Column m of L is a * e_m.
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Term& t : a.terms()) {
    for (Mask m = 0; m < static_cast<Mask>(n); ++m) {
      L(static_cast<Eigen::Index>(t.mask ^ m), m) += blade_sign(t.mask, m) * t.coeff;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(L);
  lu.setThreshold(a.tol());
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  const Eigen::VectorXd x = lu.solve(rhs);
  std::vector<Term> terms;
  for (int m = 0; m < n; ++m) {
    if (x(m) != 0.0) terms.push_back({static_cast<Mask>(m), x(m)});
  }
  return Multivector::from_terms(r, std::move(terms), a.tol());
}

Multivector inverse(const Multivector& a) {
  auto inv = try_inverse(a);
  if (!inv) throw Error(ErrorCode::NotInvertible, "element is singular: " + a.to_string());
  return *inv;
}

Multivector twisted_adjoint(const Multivector& x, const Multivector& phi) {
  return grade_involution(x) * phi * inverse_in_E(x);
}

Multivector adjoint(const Multivector& x, const Multivector& phi) {
  return x * phi * inverse_in_E(x);
}

std::vector<double> vector_action_matrix(const Multivector& x, bool twisted) {
  const int r = x.r();
  std::vector<double> m(static_cast<std::size_t>(r * r), 0.0);
  const Multivector inv = inverse_in_E(x);
  const Multivector left = twisted ? grade_involution(x) : x;
  for (int j = 0; j < r; ++j) {
    const Multivector img = left * Multivector::blade(r, Mask{1} << j) * inv;
    for (int i = 0; i < r; ++i) m[static_cast<std::size_t>(i * r + j)] = img.coeff(Mask{1} << i);
  }
  return m;
}

double determinant(std::vector<double> m, int n) {
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(
      m.data(), n, n);
  return mat.determinant();
}

Multivector commutator(const Multivector& a, const Multivector& b) { return a * b - b * a; }

namespace {

bool acts_on_vectors(const Multivector& a) {
  auto inv = try_inverse_in_E(a);
  if (!inv) return false;
  const Multivector alpha = grade_involution(a);
  for (int i = 0; i < a.r(); ++i) {
    const Multivector img = alpha * Multivector::blade(a.r(), Mask{1} << i) * *inv;
    if (img.norm_outside_grade(1) > a.tol()) return false;
  }
  return true;
}

}  // namespace

bool membership(const Multivector& a, MemberKind kind, int n) {
  const double tol = a.tol();
  auto in_E = [&] {
    const Multivector nm = norm_map(a);
    return (nm - grade_project(nm, 0)).max_abs() <= tol;
  };
  auto in_SE = [&] { return in_E() && std::abs(quad_form(a) - 1.0) <= tol; };
  switch (kind) {
    case MemberKind::E: return in_E();
    case MemberKind::S_E: return in_SE();
    case MemberKind::D0: return (conjugate(a) - a).max_abs() <= tol;
    case MemberKind::D1: return (conjugate(a) + a).max_abs() <= tol;
    case MemberKind::J: return (conjugate(a) + a).max_abs() <= tol && in_SE();
    case MemberKind::Pin: return in_SE() && acts_on_vectors(a);
    case MemberKind::Spin:
      return in_SE() && acts_on_vectors(a) && (grade_involution(a) - a).max_abs() <= tol;
    case MemberKind::M_n: {
      if (n < 1 || n > a.r() - 1) {
        throw Error(ErrorCode::OutOfRange, "M_n requires 1 <= n <= r-1");
      }
      if (a.norm_outside_grade(n) > tol) return false;
      if (std::abs(quad_form(a) - 1.0) > tol) return false;
      if (n == 2) {
        if (a.r() < 4) return true;
        return grade_project(a * a, 4).max_abs() <= tol;
      }
      return acts_on_vectors(a);
    }
    case MemberKind::SphereTilde: return std::abs(quad_form(a) - 1.0) <= tol;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown membership kind");
}

Multivector volume_form(int n, int r) {
  check_dimension(r);
  if (n < 1 || n > r) throw Error(ErrorCode::OutOfRange, "volume_form requires 1 <= n <= r");
  return Multivector::blade(r, (Mask{1} << n) - 1);
}

}  // namespace cliffsurf
