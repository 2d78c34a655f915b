#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cliffsurf/calculus.hpp"

namespace cliffsurf {

// Connection d + A on the trivial Cl(V_r) bundle; apply(k, axis, phi) = A_axis(phi) at node k.
struct Connection {
  int r = kMinDimension;
  GridShape shape;
  std::function<Multivector(std::size_t, Axis, const Multivector&)> apply;
};

// Connection one-form acting by left multiplication: A(phi) = a phi.
Connection left_connection(const OneFormField& a);
// A(phi) = phi b
Connection right_connection(const OneFormField& b);

// {1, e1, e2, e1e2}, or the full blade basis.
std::vector<Multivector> test_sections(int r, bool full_basis = false);

struct CurvatureOptions {
  bool full_basis = false;
  ResidualOptions residual;
};

// F(d_u, d_v) phi = d_u(A_v phi) - d_v(A_u phi) + A_u(A_v phi) - A_v(A_u phi) for constant
// test sections phi; max norm divided by `normalization`.
ResidualReport curvature_residual(std::string name, const Connection& conn, double normalization,
                                  const CurvatureOptions& opts = {});

// Parallel transport of phi once around the u-loop at column j, using per-edge
// factors (1 - A du). Diagnostic only.
Multivector holonomy_u(const Connection& conn, int j, const Multivector& phi);

enum class PhiVariant { Phi, PhiTilde };
enum class SampleKind { LambdaXY, Sigma, Theta };

struct ConnectionSample {
  SampleKind kind = SampleKind::LambdaXY;
  PhiVariant variant = PhiVariant::Phi;
  // (x, y), (a, b) for sigma = a + b e1, or (theta, 0).
  double p0 = 0.0;
  double p1 = 0.0;
  ResidualReport curvature;
};

// Phi:      d - Phi + (x + y f) Phi
// PhiTilde: d + PhiT + (x + y f) PhiT
Connection lambda_connection(const SurfaceGrid& f, double x, double y, PhiVariant variant);
// lambda = x + y f with x = (s^-1 + s)/2, y = (s^-1 - s) e1/2; complex scalars act on the right.
Connection sigma_connection(const SurfaceGrid& f, double a, double b, PhiVariant variant);
// D - cos(theta) S + sin(theta) *S with (D, S) = (d - Phi, Phi) or (d + PhiT, PhiT).
Connection theta_connection(const SurfaceGrid& f, double theta, PhiVariant variant);

// Curvatures normalized by max |df|^2.
ConnectionSample lambda_connection_curvature(const SurfaceGrid& f, double x, double y,
                                             PhiVariant variant = PhiVariant::Phi,
                                             const CurvatureOptions& opts = {});
ConnectionSample sigma_connection_curvature(const SurfaceGrid& f, double a, double b,
                                            PhiVariant variant = PhiVariant::Phi,
                                            const CurvatureOptions& opts = {});
ConnectionSample theta_connection_curvature(const SurfaceGrid& f, double theta,
                                            PhiVariant variant = PhiVariant::Phi,
                                            const CurvatureOptions& opts = {});
std::vector<ConnectionSample> tt_star_sweep(const SurfaceGrid& f, int n_theta,
                                            PhiVariant variant = PhiVariant::Phi,
                                            const CurvatureOptions& opts = {});

// (x, y) on the unit circle matching theta for each variant:
// Phi -> (-cos, sin), PhiTilde -> (-cos, -sin).
std::pair<double, double> theta_to_lambda(double theta, PhiVariant variant);

struct SweepRequest {
  SampleKind kind;
  PhiVariant variant;
  double p0;
  double p1;
};

ConnectionSample evaluate_sample(const SurfaceGrid& f, const SweepRequest& req,
                                 const CurvatureOptions& opts = {});

std::vector<SweepRequest> unit_circle_samples(int n, PhiVariant variant);
// |sigma| in {0.5, 1, 2} with assorted phases.
std::vector<SweepRequest> sigma_samples(int n, PhiVariant variant);

std::string_view to_string(SampleKind kind);
std::string_view to_string(PhiVariant variant);

}  // namespace cliffsurf
