#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cliffsurf/grid.hpp"

namespace cliffsurf {

enum class Axis { U, V };
enum class Side { Left, Right };

// Second-order derivative along one axis: central on interior and periodic
// nodes, one-sided three-point stencils on non-periodic edges.
std::vector<Multivector> partial(const std::vector<Multivector>& x, const GridShape& s, int r,
                                 Axis axis);
std::vector<double> partial(const std::vector<double>& x, const GridShape& s, Axis axis);

OneFormField differential(const SurfaceGrid& f);
// density = d_u(w_v) - d_v(w_u)
TwoFormField exterior_derivative(const OneFormField& w);

// E = Q(w_u), F = B(w_u, w_v), G = Q(w_v)
MetricField induced_metric(const OneFormField& df);
MetricField induced_metric(const SurfaceGrid& f);

// (*w)_u = (-F w_u + E w_v)/W, (*w)_v = (-G w_u + F w_v)/W.
// Throws DegenerateMetric when W <= tol at some node.
OneFormField hodge_star(const OneFormField& w, const MetricField& g, double tol = 1e-12);
// Star with respect to the conformal structure carried by `domain`.
OneFormField hodge_star(const OneFormField& w, const SurfaceGrid& domain);

struct GaussMapResult {
  SurfaceGrid N;
  // 1 where the tangent frame is degenerate; N is zero there.
  std::vector<unsigned char> degenerate;
  std::size_t degenerate_count = 0;
};

// N = e_u e_v' with e_u = f_u/|f_u| and e_v' the unit part of f_v orthogonal to f_u.
GaussMapResult gauss_map_partial(const OneFormField& df, double tol = 1e-10);
SurfaceGrid gauss_map(const OneFormField& df, double tol = 1e-10);
SurfaceGrid gauss_map(const SurfaceGrid& f, double tol = 1e-10);

// Max over nodes of the u/v component norms of a one-form, divided by `normalization`.
ResidualReport form_report(std::string name, const std::vector<const OneFormField*>& forms,
                           double normalization, const ResidualOptions& opts = {},
                           const std::vector<unsigned char>* mask = nullptr);
ResidualReport two_form_report(std::string name, const std::vector<const TwoFormField*>& forms,
                               double normalization, const ResidualOptions& opts = {},
                               const std::vector<unsigned char>* mask = nullptr);
ResidualReport grid_report(std::string name, const std::vector<const SurfaceGrid*>& grids,
                           double normalization, const ResidualOptions& opts = {},
                           const std::vector<unsigned char>* mask = nullptr);

// |*df - N df| and |*df + df N| relative to max |df|.
ResidualReport conformality_residual(const SurfaceGrid& f, const SurfaceGrid& N,
                                     const ResidualOptions& opts = {});
// Same check for a given differential; `domain` supplies the conformal structure.
ResidualReport conformality_residual(const OneFormField& df, const SurfaceGrid& left_N,
                                     const SurfaceGrid& right_N, const SurfaceGrid& domain,
                                     const ResidualOptions& opts = {});

// A_N = (*dN + N dN)/4
OneFormField hopf_field(const SurfaceGrid& f, const SurfaceGrid& N);
// max |A_N| relative to max |dN|
ResidualReport hopf_report(const SurfaceGrid& f, const SurfaceGrid& N,
                           const ResidualOptions& opts = {});

// H = Delta f / 2 with the Laplace-Beltrami operator of the induced metric.
// With this sign *dN + N dN = -2 H df holds (unit sphere: H = -f).
SurfaceGrid mean_curvature(const SurfaceGrid& f, double tol = 1e-12);

// *dN + N dN + 2 H df and *dN + N dN - 2 df H relative to max |dN|.
ResidualReport mcv_identity_residual(const SurfaceGrid& f, const SurfaceGrid& N,
                                     const ResidualOptions& opts = {});

// Throws NotSphereValued unless every node has unit Q and alpha(f)^T = +-f.
void require_sphere_valued(const SurfaceGrid& f, bool odd_only = false, double tol = 1e-8);

// d(f *df) and d(*df f) relative to max |df|^2.
ResidualReport harmonicity_residual(const SurfaceGrid& f, const ResidualOptions& opts = {});

// Phi = (*df + f df)/4, PhiTilde = (*df - f df)/4.
std::pair<OneFormField, OneFormField> phi_fields(const SurfaceGrid& f);

// Left: (d phi + N * d phi)/2. Right: (d phi + * d phi N)/2. Relative to max |d phi|.
ResidualReport holomorphic_residual(const SurfaceGrid& phi, const SurfaceGrid& N, Side side,
                                    const ResidualOptions& opts = {});

struct PotentialOptions {
  int base_i = 0;
  int base_j = 0;
  // Rejects w when max|dw| / max|w| exceeds this; default 50 h^2.
  std::optional<double> closedness_threshold;
  // Periods below period_tol * max(1, |w| L) count as zero.
  double period_tol = 1e-8;
  ResidualOptions residual;
};

struct Potential {
  SurfaceGrid g;
  ResidualReport closedness;
  double threshold = 0.0;
  std::optional<Multivector> period_u;
  std::optional<Multivector> period_v;
  bool cut_u = false;
  bool cut_v = false;
};

// Closedness measure used by integrate_potential.
ResidualReport closedness_report(const OneFormField& w, const ResidualOptions& opts = {});

// g(base) = 0, dg ~ w by trapezoidal sweeps: along the base row in u, then along
// each column in v. Axes with nonzero period are returned cut (non-periodic).
Potential integrate_potential(const OneFormField& w, const PotentialOptions& opts = {});

}  // namespace cliffsurf
