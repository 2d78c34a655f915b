#include "cliffsurf/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "cliffsurf/clifford.hpp"

namespace cliffsurf {

namespace {

void check_stencil(const GridShape& s) {
  if (s.nu < 3 || s.nv < 3) {
    throw Error(ErrorCode::GridTooSmall, "finite differences need at least 3 nodes per axis");
  }
}

// Applies the derivative stencil along one axis; T is Multivector or double.
template <class T>
std::vector<T> apply_partial(const std::vector<T>& x, const GridShape& s, Axis axis, const T& zero) {
  check_stencil(s);
  if (x.size() != s.size()) throw Error(ErrorCode::ShapeMismatch, "field does not match grid");
  const bool along_u = axis == Axis::U;
  const int n = along_u ? s.nu : s.nv;
  const double h = along_u ? s.du : s.dv;
  const bool periodic = along_u ? s.periodic_u : s.periodic_v;
  const double c = 1.0 / (2.0 * h);
  std::vector<T> out(x.size(), zero);
  auto at = [&](int i, int j, int k) -> const T& {
    return along_u ? x[s.index(k, j)] : x[s.index(i, k)];
  };
  for (int i = 0; i < s.nu; ++i) {
    for (int j = 0; j < s.nv; ++j) {
      const int k = along_u ? i : j;
      T d;
      if (periodic || (k > 0 && k < n - 1)) {
        const int kp = (k + 1) % n;
        const int km = (k - 1 + n) % n;
        d = (at(i, j, kp) - at(i, j, km)) * c;
      } else if (k == 0) {
        d = (at(i, j, 1) * 4.0 - at(i, j, 0) * 3.0 - at(i, j, 2)) * c;
      } else {
        d = (at(i, j, n - 1) * 3.0 - at(i, j, n - 2) * 4.0 + at(i, j, n - 3)) * c;
      }
      out[s.index(i, j)] = std::move(d);
    }
  }
  return out;
}

double safe_norm(double x) { return x > 0.0 ? x : 1.0; }

}  // namespace

std::vector<Multivector> partial(const std::vector<Multivector>& x, const GridShape& s, int r,
                                 Axis axis) {
  return apply_partial(x, s, axis, Multivector(r));
}

std::vector<double> partial(const std::vector<double>& x, const GridShape& s, Axis axis) {
  return apply_partial(x, s, axis, 0.0);
}

OneFormField differential(const SurfaceGrid& f) {
  OneFormField df(f.r, f.shape);
  df.u = partial(f.values, f.shape, f.r, Axis::U);
  df.v = partial(f.values, f.shape, f.r, Axis::V);
  return df;
}

TwoFormField exterior_derivative(const OneFormField& w) {
  TwoFormField out(w.r, w.shape);
  const auto dv_u = partial(w.v, w.shape, w.r, Axis::U);
  const auto du_v = partial(w.u, w.shape, w.r, Axis::V);
  for (std::size_t k = 0; k < out.density.size(); ++k) out.density[k] = dv_u[k] - du_v[k];
  return out;
}

MetricField induced_metric(const OneFormField& df) {
  const std::size_t n = df.shape.size();
  std::vector<double> E(n), F(n), G(n);
  for (std::size_t k = 0; k < n; ++k) {
    E[k] = quad_form(df.u[k]);
    F[k] = inner(df.u[k], df.v[k]);
    G[k] = quad_form(df.v[k]);
  }
  return MetricField::from_efg(df.shape, std::move(E), std::move(F), std::move(G));
}

MetricField induced_metric(const SurfaceGrid& f) { return induced_metric(differential(f)); }

OneFormField hodge_star(const OneFormField& w, const MetricField& g, double tol) {
  if (!w.shape.compatible(g.shape)) {
    throw Error(ErrorCode::ShapeMismatch, "metric does not match the form's grid");
  }
  OneFormField out(w.r, w.shape);
  for (std::size_t k = 0; k < w.u.size(); ++k) {
    const double W = g.W[k];
    if (!(W > tol)) {
      throw Error(ErrorCode::DegenerateMetric,
                  "area density " + std::to_string(W) + " at node " + std::to_string(k));
    }
    out.u[k] = (w.v[k] * g.E[k] - w.u[k] * g.F[k]) / W;
    out.v[k] = (w.v[k] * g.F[k] - w.u[k] * g.G[k]) / W;
  }
  return out;
}

OneFormField hodge_star(const OneFormField& w, const SurfaceGrid& domain) {
  return hodge_star(w, domain.conformal_structure());
}

GaussMapResult gauss_map_partial(const OneFormField& df, double tol) {
  GaussMapResult res;
  res.N = SurfaceGrid(df.r, df.shape);
  res.degenerate.assign(df.shape.size(), 0);
  double scale = 0.0;
  for (std::size_t k = 0; k < df.u.size(); ++k) scale = std::max(scale, node_norm(df, k));
  for (std::size_t k = 0; k < df.u.size(); ++k) {
    const Multivector& fu = df.u[k];
    const Multivector& fv = df.v[k];
    const double nu = fu.norm();
    const double bound = 1e-8 * std::max(scale, 1e-300);
    if (fu.norm_outside_grade(1) > bound || fv.norm_outside_grade(1) > bound) {
      throw Error(ErrorCode::InvalidArgument, "gauss_map needs a vector-valued differential");
    }
    if (nu <= tol * std::max(1.0, scale)) {
      res.degenerate[k] = 1;
      ++res.degenerate_count;
      continue;
    }
    const Multivector eu = grade_project(fu, 1) / nu;
    Multivector perp = grade_project(fv, 1) - eu * inner(eu, fv);
    const double np = perp.norm();
    if (np <= tol * std::max(1.0, scale)) {
      res.degenerate[k] = 1;
      ++res.degenerate_count;
      continue;
    }
    perp /= np;
    res.N.values[k] = grade_project(eu * perp, 2);
  }
  return res;
}

SurfaceGrid gauss_map(const OneFormField& df, double tol) {
  GaussMapResult res = gauss_map_partial(df, tol);
  if (res.degenerate_count) {
    throw Error(ErrorCode::DegenerateMetric,
                std::to_string(res.degenerate_count) + " nodes with a degenerate tangent frame");
  }
  return std::move(res.N);
}

SurfaceGrid gauss_map(const SurfaceGrid& f, double tol) {
  SurfaceGrid N = gauss_map(differential(f), tol);
  N.inherit_structure(f);
  return N;
}

ResidualReport form_report(std::string name, const std::vector<const OneFormField*>& forms,
                           double normalization, const ResidualOptions& opts,
                           const std::vector<unsigned char>* mask) {
  if (forms.empty()) throw Error(ErrorCode::InvalidArgument, "no forms to report");
  const GridShape& s = forms.front()->shape;
  ResidualAccumulator acc(std::move(name), s, opts);
  for (int i = 0; i < s.nu; ++i) {
    for (int j = 0; j < s.nv; ++j) {
      const std::size_t k = s.index(i, j);
      if (mask && (*mask)[k]) {
        acc.mask(i, j);
        continue;
      }
      double m = 0.0;
      for (const OneFormField* w : forms) m = std::max(m, node_norm(*w, k));
      acc.add(i, j, m);
    }
  }
  return acc.finish(normalization);
}

ResidualReport two_form_report(std::string name, const std::vector<const TwoFormField*>& forms,
                               double normalization, const ResidualOptions& opts,
                               const std::vector<unsigned char>* mask) {
  if (forms.empty()) throw Error(ErrorCode::InvalidArgument, "no forms to report");
  const GridShape& s = forms.front()->shape;
  ResidualAccumulator acc(std::move(name), s, opts);
  for (int i = 0; i < s.nu; ++i) {
    for (int j = 0; j < s.nv; ++j) {
      const std::size_t k = s.index(i, j);
      if (mask && (*mask)[k]) {
        acc.mask(i, j);
        continue;
      }
      double m = 0.0;
      for (const TwoFormField* w : forms) m = std::max(m, w->density[k].norm());
      acc.add(i, j, m);
    }
  }
  return acc.finish(normalization);
}

ResidualReport grid_report(std::string name, const std::vector<const SurfaceGrid*>& grids,
                           double normalization, const ResidualOptions& opts,
                           const std::vector<unsigned char>* mask) {
  if (grids.empty()) throw Error(ErrorCode::InvalidArgument, "no grids to report");
  const GridShape& s = grids.front()->shape;
  ResidualAccumulator acc(std::move(name), s, opts);
  for (int i = 0; i < s.nu; ++i) {
    for (int j = 0; j < s.nv; ++j) {
      if (mask && (*mask)[s.index(i, j)]) {
        acc.mask(i, j);
        continue;
      }
      double m = 0.0;
      for (const SurfaceGrid* g : grids) m = std::max(m, g->at(i, j).norm());
      acc.add(i, j, m);
    }
  }
  return acc.finish(normalization);
}

ResidualReport conformality_residual(const OneFormField& df, const SurfaceGrid& left_N,
                                     const SurfaceGrid& right_N, const SurfaceGrid& domain,
                                     const ResidualOptions& opts) {
  const OneFormField sdf = hodge_star(df, domain);
  const OneFormField left = sdf - left_N * df;
  const OneFormField right = sdf + df * right_N;
  return form_report("conformality", {&left, &right}, safe_norm(max_node_norm(df)), opts);
}

ResidualReport conformality_residual(const SurfaceGrid& f, const SurfaceGrid& N,
                                     const ResidualOptions& opts) {
  return conformality_residual(differential(f), N, N, f, opts);
}

OneFormField hopf_field(const SurfaceGrid& f, const SurfaceGrid& N) {
  const OneFormField dN = differential(N);
  return 0.25 * (hodge_star(dN, f) + N * dN);
}

ResidualReport hopf_report(const SurfaceGrid& f, const SurfaceGrid& N, const ResidualOptions& opts) {
  const OneFormField dN = differential(N);
  const OneFormField A = 0.25 * (hodge_star(dN, f) + N * dN);
  return form_report("hopf", {&A}, safe_norm(max_node_norm(dN)), opts);
}

SurfaceGrid mean_curvature(const SurfaceGrid& f, double tol) {
  const OneFormField df = differential(f);
  const MetricField g = induced_metric(df);
  const std::size_t n = f.shape.size();
  std::vector<Multivector> pu(n, Multivector(f.r)), pv(n, Multivector(f.r));
  for (std::size_t k = 0; k < n; ++k) {
    const double W = g.W[k];
    if (!(W > tol)) throw Error(ErrorCode::DegenerateMetric, "mean_curvature: W vanishes");
    pu[k] = (df.u[k] * g.G[k] - df.v[k] * g.F[k]) / W;
    pv[k] = (df.v[k] * g.E[k] - df.u[k] * g.F[k]) / W;
  }
  const auto a = partial(pu, f.shape, f.r, Axis::U);
  const auto b = partial(pv, f.shape, f.r, Axis::V);
  SurfaceGrid H(f.r, f.shape);
  for (std::size_t k = 0; k < n; ++k) H.values[k] = (a[k] + b[k]) / (2.0 * g.W[k]);
  H.inherit_structure(f);
  return H;
}

ResidualReport mcv_identity_residual(const SurfaceGrid& f, const SurfaceGrid& N,
                                     const ResidualOptions& opts) {
  const OneFormField df = differential(f);
  const OneFormField dN = differential(N);
  const SurfaceGrid H = mean_curvature(f);
  const OneFormField lhs = hodge_star(dN, f) + N * dN;
  const OneFormField left = lhs + 2.0 * (H * df);
  const OneFormField right = lhs - 2.0 * (df * H);
  return form_report("mcv_identity", {&left, &right}, safe_norm(max_node_norm(dN)), opts);
}

void require_sphere_valued(const SurfaceGrid& f, bool odd_only, double tol) {
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const Multivector& x = f.values[k];
    const double q = quad_form(x);
    const Multivector c = conjugate(x);
    const bool d1 = (c + x).max_abs() <= tol;
    const bool d0 = (c - x).max_abs() <= tol;
    if (std::abs(q - 1.0) > tol || !(d1 || (!odd_only && d0))) {
      throw Error(ErrorCode::NotSphereValued,
                  "node " + std::to_string(k) + " is not a unit element of D^" +
                      (odd_only ? std::string("1") : std::string("n")) +
                      " (Q = " + std::to_string(q) + ")");
    }
  }
}

ResidualReport harmonicity_residual(const SurfaceGrid& f, const ResidualOptions& opts) {
  require_sphere_valued(f);
  const OneFormField df = differential(f);
  const OneFormField sdf = hodge_star(df, f);
  const TwoFormField a = exterior_derivative(f * sdf);
  const TwoFormField b = exterior_derivative(sdf * f);
  const MetricField g = induced_metric(df);
  double wmax = 0.0;
  for (double w : g.W) wmax = std::max(wmax, w);
  std::vector<unsigned char> mask(g.W.size(), 0);
  for (std::size_t k = 0; k < mask.size(); ++k) {
    mask[k] = g.W[k] <= opts.degenerate_tol * std::max(1.0, wmax) ? 1 : 0;
  }
  const double scale = max_node_norm(df);
  return two_form_report("harmonicity", {&a, &b}, safe_norm(scale * scale), opts, &mask);
}

std::pair<OneFormField, OneFormField> phi_fields(const SurfaceGrid& f) {
  require_sphere_valued(f, true);
  const OneFormField df = differential(f);
  const OneFormField sdf = hodge_star(df, f);
  const OneFormField fdf = f * df;
  return {0.25 * (sdf + fdf), 0.25 * (sdf - fdf)};
}

ResidualReport holomorphic_residual(const SurfaceGrid& phi, const SurfaceGrid& N, Side side,
                                    const ResidualOptions& opts) {
  for (const Multivector& n : N.values) {
    if (!membership(n.with_tol(1e-8), MemberKind::J)) {
      throw Error(ErrorCode::InvalidArgument, "complex structure must be J-valued");
    }
  }
  const OneFormField dphi = differential(phi);
  const OneFormField sd = hodge_star(dphi, N.structure ? N : phi);
  const OneFormField op =
      side == Side::Left ? 0.5 * (dphi + N * sd) : 0.5 * (dphi + sd * N);
  ResidualReport rep = form_report(side == Side::Left ? "holomorphic_left" : "holomorphic_right",
                                   {&op}, safe_norm(max_node_norm(dphi)), opts);
  return rep;
}

ResidualReport closedness_report(const OneFormField& w, const ResidualOptions& opts) {
  const TwoFormField dw = exterior_derivative(w);
  return two_form_report("closedness", {&dw}, safe_norm(max_node_norm(w)), opts);
}

Potential integrate_potential(const OneFormField& w, const PotentialOptions& opts) {
  const GridShape& s = w.shape;
  check_stencil(s);
  if (opts.base_i < 0 || opts.base_i >= s.nu || opts.base_j < 0 || opts.base_j >= s.nv) {
    throw Error(ErrorCode::OutOfRange, "base node outside the grid");
  }
  Potential out;
  out.closedness = closedness_report(w, opts.residual);
  const double h = s.h();
  out.threshold = opts.closedness_threshold.value_or(50.0 * h * h);
  out.closedness.notes = "threshold " + std::to_string(out.threshold);
  if (out.closedness.max_norm > out.threshold) {
    throw Error(ErrorCode::NotClosed, "form is not closed: relative |dw| = " +
                                          std::to_string(out.closedness.max_norm) +
                                          " exceeds " + std::to_string(out.threshold));
  }

  const int bi = opts.base_i;
  const int bj = opts.base_j;
  SurfaceGrid g(w.r, s);
  auto half = [](const Multivector& a, const Multivector& b, double d) { return (a + b) * (0.5 * d); };
  for (int i = bi + 1; i < s.nu; ++i) {
    g.at(i, bj) = g.at(i - 1, bj) + half(w.u[s.index(i - 1, bj)], w.u[s.index(i, bj)], s.du);
  }
  for (int i = bi - 1; i >= 0; --i) {
    g.at(i, bj) = g.at(i + 1, bj) - half(w.u[s.index(i + 1, bj)], w.u[s.index(i, bj)], s.du);
  }
  for (int i = 0; i < s.nu; ++i) {
    for (int j = bj + 1; j < s.nv; ++j) {
      g.at(i, j) = g.at(i, j - 1) + half(w.v[s.index(i, j - 1)], w.v[s.index(i, j)], s.dv);
    }
    for (int j = bj - 1; j >= 0; --j) {
      g.at(i, j) = g.at(i, j + 1) - half(w.v[s.index(i, j + 1)], w.v[s.index(i, j)], s.dv);
    }
  }

  const double scale = std::max(1.0, max_node_norm(w));
  std::string notes;
  if (s.periodic_u) {
    Multivector p(w.r);
    for (int i = 0; i < s.nu; ++i) {
      p += half(w.u[s.index(i, bj)], w.u[s.index((i + 1) % s.nu, bj)], s.du);
    }
    const double len = s.du * s.nu;
    out.cut_u = p.norm() > opts.period_tol * scale * std::max(1.0, len);
    out.period_u = std::move(p);
  }
  if (s.periodic_v) {
    Multivector p(w.r);
    for (int j = 0; j < s.nv; ++j) {
      p += half(w.v[s.index(bi, j)], w.v[s.index(bi, (j + 1) % s.nv)], s.dv);
    }
    const double len = s.dv * s.nv;
    out.cut_v = p.norm() > opts.period_tol * scale * std::max(1.0, len);
    out.period_v = std::move(p);
  }
  if (out.cut_u) {
    g.shape.periodic_u = false;
    out.closedness.notes += "; nonzero u-period, domain cut at i=0";
  }
  if (out.cut_v) {
    g.shape.periodic_v = false;
    out.closedness.notes += "; nonzero v-period, domain cut at j=0";
  }
  out.g = std::move(g);
  return out;
}

}  // namespace cliffsurf
