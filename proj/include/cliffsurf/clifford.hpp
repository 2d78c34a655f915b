#pragma once

#include <optional>
#include <vector>

#include "cliffsurf/multivector.hpp"

namespace cliffsurf {

Multivector grade_project(const Multivector& a, int k);
Multivector grade_involution(const Multivector& a);
Multivector reversion(const Multivector& a);
// alpha(a)^T: grade k picks up (-1)^{k(k+1)/2}.
Multivector conjugate(const Multivector& a);

// N(a) = alpha(a)^T a
Multivector norm_map(const Multivector& a);
// Scalar part of N(a); equals the squared Euclidean norm of the coefficients.
double quad_form(const Multivector& a);
// Scalar part of alpha(a)^T b.
double inner(const Multivector& a, const Multivector& b);

// Inverse for elements whose norm map is a nonzero scalar (the set E^x).
// Throws NotInvertible otherwise.
Multivector inverse_in_E(const Multivector& a);
std::optional<Multivector> try_inverse_in_E(const Multivector& a);
// Inverse in the full algebra via a dense linear solve (r <= 10).
std::optional<Multivector> try_inverse(const Multivector& a);
Multivector inverse(const Multivector& a);

// alpha(x) phi x^{-1}
Multivector twisted_adjoint(const Multivector& x, const Multivector& phi);
// x phi x^{-1}
Multivector adjoint(const Multivector& x, const Multivector& phi);

// Matrix (row-major, r x r) of v -> x v x^{-1} (twisted when requested) restricted to V_r.
// Only meaningful when x acts orthogonally on V_r.
std::vector<double> vector_action_matrix(const Multivector& x, bool twisted);
double determinant(std::vector<double> m, int n);

// ab - ba
Multivector commutator(const Multivector& a, const Multivector& b);

enum class MemberKind { E, S_E, D0, D1, J, Pin, Spin, M_n, SphereTilde };

// Predicate evaluated with a.tol(). n is only read for M_n (1 <= n <= r-1).
bool membership(const Multivector& a, MemberKind kind, int n = 0);

// e_1 ... e_n in Cl(V_r)
Multivector volume_form(int n, int r);

}  // namespace cliffsurf
