#pragma once

#include <optional>
#include <string>

#include "cliffsurf/calculus.hpp"
#include "cliffsurf/connections.hpp"

namespace cliffsurf {

// Nodewise inverse: inverse_in_E where possible, otherwise the general inverse.
// Throws NotInvertible naming the first failing node.
SurfaceGrid invert(const SurfaceGrid& a, const char* what = "field");
// x phi x^-1 nodewise.
SurfaceGrid adjoint(const SurfaceGrid& x, const SurfaceGrid& phi);

// lambda df alpha(gamma)^T componentwise.
OneFormField spinor_pairing(const SurfaceGrid& lambda, const OneFormField& df,
                            const SurfaceGrid& gamma);

struct TransformOptions {
  PotentialOptions potential;
  ResidualOptions residual;
  // Precondition thresholds on relative residuals; default 50 h^2.
  std::optional<double> conformal_threshold;
  std::optional<double> holomorphic_threshold;
  std::optional<double> minimal_threshold;
  std::optional<double> wedge_threshold;
};

struct SpinTransformResult {
  SurfaceGrid f_new;
  // lambda df alpha(lambda)^T, the differential the output integrates.
  OneFormField df_new;
  ResidualReport holomorphicity;
  ResidualReport closedness;
  // *df' = N' df' = -df' N' with N' = Ad_lambda N, measured on df_new.
  ResidualReport conformality;
  SurfaceGrid gauss_old;
  SurfaceGrid gauss_new;
  std::optional<Multivector> period_u;
  std::optional<Multivector> period_v;
  // Largest non-vector part of f_new relative to its size.
  double grade1_defect = 0.0;
};

// Requires f conformal with Gauss map N and d lambda + * d lambda N ~ 0.
SpinTransformResult spin_transform(const SurfaceGrid& f, const SurfaceGrid& N,
                                   const SurfaceGrid& lambda, const TransformOptions& opts = {});
SpinTransformResult spin_transform(const SurfaceGrid& f, const SurfaceGrid& lambda,
                                   const TransformOptions& opts = {});

struct ConjugateResult {
  SurfaceGrid h;
  ResidualReport hopf;
  // |w + *df| for the integrated form w; zero by construction.
  ResidualReport construction;
  // dh + *df with dh differentiated back from h; O(h^2).
  ResidualReport recovered;
  ResidualReport closedness;
  std::optional<Multivector> period_u;
  std::optional<Multivector> period_v;
};

// dh = df N = -*df; throws NotMinimal when the Hopf field is not small.
ConjugateResult conjugate_surface(const SurfaceGrid& f, const TransformOptions& opts = {});

// T = (h + c) N with a vector constant c = (1 + max|h|) e1 keeping T invertible.
SurfaceGrid conjugate_darboux_T(const SurfaceGrid& h, const SurfaceGrid& N);

enum class DarbouxSide { Left, Right, TwoSided };
std::string_view to_string(DarbouxSide side);

struct DarbouxOptions : TransformOptions {
  // g(base); when absent a vector (1 + max|g|) e1 (or scalar) keeps T invertible.
  std::optional<Multivector> offset;
};

struct DarbouxResult {
  DarbouxSide side = DarbouxSide::Right;
  SurfaceGrid f_sharp;
  SurfaceGrid T;
  // N# = -Ad_T N~ (right) or N~# = -Ad_{T^-1} N (left).
  SurfaceGrid N_sharp;
  SurfaceGrid g;
  ResidualReport wedge;
  ResidualReport closedness;
  ResidualReport defining;
  // Two-sided only: *df# = -df# N~# with N~# = -Ad_{T^-1} N.
  std::optional<ResidualReport> defining_left;
  SurfaceGrid N_left;
};

// Right: dg = -df lambda, f# = f + g lambda^-1, needs *df = -df N~ and df ^ d lambda = 0.
// Left:  dg = -lambda df, f# = f + lambda^-1 g, needs *df = N df and d lambda ^ df = 0.
DarbouxResult darboux(const SurfaceGrid& f, const SurfaceGrid& N, const SurfaceGrid& lambda,
                      Side side, const DarbouxOptions& opts = {});

// f# = f + T for f into V_r with *df = N df = -df N; both defining residuals.
DarbouxResult darboux_two_sided(const SurfaceGrid& f, const SurfaceGrid& N, const SurfaceGrid& T,
                                const ResidualOptions& opts = {});

// df ^ dfc and dfc ^ df relative to max|df| max|dfc|.
ResidualReport isothermic_dual_residual(const SurfaceGrid& f, const SurfaceGrid& fc,
                                        const ResidualOptions& opts = {});

// Right: phi -> (T#)^-1 df# phi. Left: phi -> phi df# T#^-1.
Connection darboux_connection(const SurfaceGrid& f_sharp, const SurfaceGrid& T, Side side);
// Curvature relative to max |connection form|^2.
ResidualReport darboux_connection_residual(const SurfaceGrid& f_sharp, const SurfaceGrid& T,
                                           Side side, const CurvatureOptions& opts = {});

struct PermutabilityResult {
  SurfaceGrid chi;
  // Relative least-squares residual of d lambda0 = -d lambda1 chi (right side).
  ResidualReport chi_fit;
  DarbouxResult first0;
  DarbouxResult first1;
  DarbouxResult second0;
  DarbouxResult second1;
  // (g0#)^-1 (f0## - f0#) - chi (g1#)^-1 (f1## - f1#) (right side).
  ResidualReport relation;
};

// Two-step transforms from lambda0, lambda1 sharing the same f.
PermutabilityResult permutability_check(const SurfaceGrid& f, const SurfaceGrid& N,
                                        const SurfaceGrid& lambda0, const SurfaceGrid& lambda1,
                                        Side side, const DarbouxOptions& opts = {},
                                        double chi_threshold = 1e-6);

// Named lambda recipes.
//   "one"       constant 1
//   "pin"       constant unit element (e1 + e2)/sqrt2 unless `pin` is given
//   "N"         the Gauss map (V_r-minimal f: f# = f + hN)
//   "fN"        f N (sphere-valued minimal f)
//   "fN+c"      f N + c with scalar c
SurfaceGrid lambda_recipe(const std::string& name, const SurfaceGrid& f, const SurfaceGrid& N,
                          double c = 0.25, const std::optional<Multivector>& pin = std::nullopt);

}  // namespace cliffsurf
