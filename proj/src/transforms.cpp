#include "cliffsurf/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "cliffsurf/clifford.hpp"

namespace cliffsurf {

namespace {

double threshold(const std::optional<double>& t, const GridShape& s) {
  const double h = s.h();
  return t.value_or(50.0 * h * h);
}

double positive_or_one(double x) { return x > 0.0 ? x : 1.0; }

bool has_values(const SurfaceGrid& g) { return !g.values.empty(); }

// Left (or right) multiplication by a as a dense 2^r x 2^r matrix.
Eigen::MatrixXd mult_matrix(const Multivector& a, bool left) {
  const int n = 1 << a.r();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (const Term& t : a.terms()) {
    for (Mask m = 0; m < static_cast<Mask>(n); ++m) {
      const int sign = left ? blade_sign(t.mask, m) : blade_sign(m, t.mask);
      M(static_cast<Eigen::Index>(t.mask ^ m), m) += sign * t.coeff;
    }
  }
  return M;
}

Eigen::VectorXd dense(const Multivector& a) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(1 << a.r());
  for (const Term& t : a.terms()) v(t.mask) = t.coeff;
  return v;
}

Multivector from_dense(int r, const Eigen::VectorXd& v) {
  std::vector<Term> terms;
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    if (v(m) != 0.0) terms.push_back({static_cast<Mask>(m), v(m)});
  }
  return Multivector::from_terms(r, std::move(terms));
}

}  // namespace

SurfaceGrid invert(const SurfaceGrid& a, const char* what) {
  SurfaceGrid out(a.r, a.shape);
  out.structure = a.structure;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    auto inv = try_inverse(a.values[k]);
    if (!inv) {
      throw Error(ErrorCode::NotInvertible, std::string(what) + " is not invertible at node " +
                                                std::to_string(k) + ": " +
                                                a.values[k].to_string());
    }
    out.values[k] = std::move(*inv);
  }
  return out;
}

SurfaceGrid adjoint(const SurfaceGrid& x, const SurfaceGrid& phi) {
  return x * phi * invert(x);
}

OneFormField spinor_pairing(const SurfaceGrid& lambda, const OneFormField& df,
                            const SurfaceGrid& gamma) {
  return lambda * df * conjugate(gamma);
}

SpinTransformResult spin_transform(const SurfaceGrid& f, const SurfaceGrid& N,
                                   const SurfaceGrid& lambda, const TransformOptions& opts) {
  SpinTransformResult res;
  const OneFormField df = differential(f);
  const ResidualReport conf = conformality_residual(df, N, N, f, opts.residual);
  if (conf.max_norm > threshold(opts.conformal_threshold, f.shape)) {
    throw Error(ErrorCode::InvalidArgument,
                "spin_transform: f is not conformal (" + std::to_string(conf.max_norm) + ")");
  }
  res.holomorphicity = holomorphic_residual(lambda, N, Side::Right, opts.residual);
  if (res.holomorphicity.max_norm > threshold(opts.holomorphic_threshold, f.shape)) {
    throw Error(ErrorCode::NotHolomorphic,
                "lambda is not holomorphic: " + std::to_string(res.holomorphicity.max_norm));
  }
  const SurfaceGrid lambda_inv = invert(lambda, "lambda");
  res.df_new = spinor_pairing(lambda, df, lambda);
  Potential pot = integrate_potential(res.df_new, opts.potential);
  res.closedness = pot.closedness;
  res.period_u = pot.period_u;
  res.period_v = pot.period_v;
  res.f_new = std::move(pot.g);
  res.f_new.inherit_structure(f);
  res.gauss_old = N;
  res.gauss_new = lambda * N * lambda_inv;
  res.conformality = conformality_residual(res.df_new, res.gauss_new, res.gauss_new, f,
                                           opts.residual);
  double worst = 0.0;
  for (std::size_t k = 0; k < res.df_new.u.size(); ++k) {
    worst = std::max({worst, res.df_new.u[k].norm_outside_grade(1),
                      res.df_new.v[k].norm_outside_grade(1)});
  }
  res.grade1_defect = worst / positive_or_one(max_node_norm(res.df_new));
  return res;
}

SpinTransformResult spin_transform(const SurfaceGrid& f, const SurfaceGrid& lambda,
                                   const TransformOptions& opts) {
  return spin_transform(f, gauss_map(f), lambda, opts);
}

ConjugateResult conjugate_surface(const SurfaceGrid& f, const TransformOptions& opts) {
  ConjugateResult res;
  const SurfaceGrid N = gauss_map(f);
  res.hopf = hopf_report(f, N, opts.residual);
  if (res.hopf.max_norm > threshold(opts.minimal_threshold, f.shape)) {
    throw Error(ErrorCode::NotMinimal,
                "surface is not minimal: relative |A_N| = " + std::to_string(res.hopf.max_norm));
  }
  const OneFormField sdf = hodge_star(differential(f), f);
  const OneFormField w = -1.0 * sdf;
  Potential pot = integrate_potential(w, opts.potential);
  res.closedness = pot.closedness;
  res.period_u = pot.period_u;
  res.period_v = pot.period_v;
  res.h = std::move(pot.g);
  res.h.inherit_structure(f);
  const double scale = positive_or_one(max_node_norm(sdf));
  const OneFormField built = w + sdf;
  res.construction = form_report("conjugate_construction", {&built}, scale, opts.residual);
  const OneFormField back = differential(res.h) + sdf;
  res.recovered = form_report("conjugate_recovered", {&back}, scale, opts.residual);
  return res;
}

SurfaceGrid conjugate_darboux_T(const SurfaceGrid& h, const SurfaceGrid& N) {
  const Multivector c = Multivector::blade(h.r, 1, 1.0 + max_node_norm(h));
  SurfaceGrid shifted = h;
  for (Multivector& x : shifted.values) x += c;
  return shifted * N;
}

std::string_view to_string(DarbouxSide side) {
  switch (side) {
    case DarbouxSide::Left: return "left";
    case DarbouxSide::Right: return "right";
    case DarbouxSide::TwoSided: return "two_sided";
  }
  return "unknown";
}

DarbouxResult darboux(const SurfaceGrid& f, const SurfaceGrid& N, const SurfaceGrid& lambda,
                      Side side, const DarbouxOptions& opts) {
  DarbouxResult res;
  res.side = side == Side::Right ? DarbouxSide::Right : DarbouxSide::Left;
  const bool right = side == Side::Right;
  const OneFormField df = differential(f);
  const OneFormField dl = differential(lambda);

  if (has_values(N)) {
    const OneFormField sdf = hodge_star(df, f);
    const OneFormField c = right ? sdf + df * N : sdf - N * df;
    const ResidualReport conf =
        form_report("conformality", {&c}, positive_or_one(max_node_norm(df)), opts.residual);
    if (conf.max_norm > threshold(opts.conformal_threshold, f.shape)) {
      throw Error(ErrorCode::InvalidArgument,
                  "darboux: f is not conformal (" + std::to_string(conf.max_norm) + ")");
    }
  }

  const TwoFormField w = right ? wedge(df, dl) : wedge(dl, df);
  res.wedge = two_form_report(right ? "wedge df^dlambda" : "wedge dlambda^df", {&w},
                              positive_or_one(max_node_norm(df) *
                                              std::max(max_node_norm(dl), max_node_norm(lambda))),
                              opts.residual);
  if (res.wedge.max_norm > threshold(opts.wedge_threshold, f.shape)) {
    throw Error(ErrorCode::WedgeNotZero,
                "wedge condition fails: " + std::to_string(res.wedge.max_norm));
  }

  const OneFormField dg = right ? -1.0 * (df * lambda) : -1.0 * (lambda * df);
  Potential pot = integrate_potential(dg, opts.potential);
  res.closedness = pot.closedness;
  SurfaceGrid g = std::move(pot.g);
  Multivector offset(f.r);
  if (opts.offset) {
    offset = *opts.offset;
  } else {
    const double m = max_node_norm(g);
    bool vector_valued = true;
    for (const Multivector& x : g.values) {
      if (x.norm_outside_grade(1) > 1e-12 * std::max(1.0, m)) {
        vector_valued = false;
        break;
      }
    }
    offset = vector_valued ? Multivector::blade(f.r, 1, 1.0 + m)
                           : Multivector::scalar(f.r, 1.0 + m);
  }
  for (Multivector& x : g.values) x += offset;
  g.inherit_structure(f);

  const SurfaceGrid lambda_inv = invert(lambda, "lambda");
  res.T = right ? g * lambda_inv : lambda_inv * g;
  const SurfaceGrid T_inv = invert(res.T, "T");
  res.f_sharp = f + res.T;
  res.f_sharp.inherit_structure(f);
  res.g = std::move(g);

  if (has_values(N)) {
    const OneFormField dfs = differential(res.f_sharp);
    const OneFormField sdfs = hodge_star(dfs, f);
    OneFormField c;
    if (right) {
      res.N_sharp = -1.0 * (res.T * N * T_inv);
      c = sdfs - res.N_sharp * dfs;
    } else {
      res.N_sharp = -1.0 * (T_inv * N * res.T);
      c = sdfs + dfs * res.N_sharp;
    }
    res.defining = form_report(right ? "darboux_right" : "darboux_left", {&c},
                               positive_or_one(max_node_norm(dfs)), opts.residual);
  } else {
    res.defining.name = right ? "darboux_right" : "darboux_left";
    res.defining.nu = f.shape.nu;
    res.defining.nv = f.shape.nv;
    res.defining.notes = "no complex structure supplied; defining residual not evaluated";
  }
  return res;
}

DarbouxResult darboux_two_sided(const SurfaceGrid& f, const SurfaceGrid& N, const SurfaceGrid& T,
                                const ResidualOptions& opts) {
  DarbouxResult res;
  res.side = DarbouxSide::TwoSided;
  res.T = T;
  const SurfaceGrid T_inv = invert(T, "T");
  res.f_sharp = f + T;
  res.f_sharp.inherit_structure(f);
  res.N_sharp = -1.0 * (T * N * T_inv);
  res.N_left = -1.0 * (T_inv * N * T);
  const OneFormField dfs = differential(res.f_sharp);
  const OneFormField sdfs = hodge_star(dfs, f);
  const double scale = positive_or_one(max_node_norm(dfs));
  const OneFormField a = sdfs - res.N_sharp * dfs;
  const OneFormField b = sdfs + dfs * res.N_left;
  res.defining = form_report("darboux_two_sided_right", {&a}, scale, opts);
  res.defining_left = form_report("darboux_two_sided_left", {&b}, scale, opts);
  return res;
}

ResidualReport isothermic_dual_residual(const SurfaceGrid& f, const SurfaceGrid& fc,
                                        const ResidualOptions& opts) {
  const OneFormField df = differential(f);
  const OneFormField dc = differential(fc);
  const TwoFormField a = wedge(df, dc);
  const TwoFormField b = wedge(dc, df);
  return two_form_report("isothermic_dual", {&a, &b},
                         positive_or_one(max_node_norm(df) * max_node_norm(dc)), opts);
}

Connection darboux_connection(const SurfaceGrid& f_sharp, const SurfaceGrid& T, Side side) {
  const OneFormField dfs = differential(f_sharp);
  const SurfaceGrid T_inv = invert(T, "T");
  return side == Side::Right ? left_connection(T_inv * dfs) : right_connection(dfs * T_inv);
}

ResidualReport darboux_connection_residual(const SurfaceGrid& f_sharp, const SurfaceGrid& T,
                                           Side side, const CurvatureOptions& opts) {
  const OneFormField dfs = differential(f_sharp);
  const SurfaceGrid T_inv = invert(T, "T");
  const OneFormField a = side == Side::Right ? T_inv * dfs : dfs * T_inv;
  const Connection conn = side == Side::Right ? left_connection(a) : right_connection(a);
  const double m = max_node_norm(a);
  return curvature_residual(side == Side::Right ? "darboux_connection_right"
                                                : "darboux_connection_left",
                            conn, positive_or_one(m * m), opts);
}

PermutabilityResult permutability_check(const SurfaceGrid& f, const SurfaceGrid& N,
                                        const SurfaceGrid& lambda0, const SurfaceGrid& lambda1,
                                        Side side, const DarbouxOptions& opts,
                                        double chi_threshold) {
  const bool right = side == Side::Right;
  const int r = f.r;
  if (r > 10) throw Error(ErrorCode::OutOfRange, "permutability solve limited to r <= 10");
  PermutabilityResult res;
  res.first0 = darboux(f, N, lambda0, side, opts);
  res.first1 = darboux(f, N, lambda1, side, opts);

  // d lambda0 = -d lambda1 chi (right) or -chi d lambda1 (left), per node in least squares.
  const OneFormField d0 = differential(lambda0);
  const OneFormField d1 = differential(lambda1);
  const int n = 1 << r;
  res.chi = SurfaceGrid(r, f.shape);
  ResidualAccumulator fit("chi_fit", f.shape, opts.residual);
  double scale = 0.0;
  for (std::size_t k = 0; k < d1.u.size(); ++k) scale = std::max(scale, node_norm(d1, k));
  for (int i = 0; i < f.shape.nu; ++i) {
    for (int j = 0; j < f.shape.nv; ++j) {
      const std::size_t k = f.shape.index(i, j);
      Eigen::MatrixXd A(2 * n, n);
      A.topRows(n) = mult_matrix(d1.u[k], !right);
      A.bottomRows(n) = mult_matrix(d1.v[k], !right);
      Eigen::VectorXd b(2 * n);
      b.head(n) = -dense(d0.u[k]);
      b.tail(n) = -dense(d0.v[k]);
      if (node_norm(d1, k) <= 1e-10 * positive_or_one(scale)) {
        fit.mask(i, j);
        res.chi.values[k] = Multivector::scalar(r, -1.0);
        continue;
      }
      const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
      const double rel = (A * x - b).norm() / std::max(b.norm(), 1e-300);
      fit.add(i, j, rel);
      res.chi.values[k] = from_dense(r, x);
    }
  }
  res.chi_fit = fit.finish(1.0);
  if (res.chi_fit.max_norm > chi_threshold) {
    throw Error(ErrorCode::IllConditionedChi,
                "chi solve residual " + std::to_string(res.chi_fit.max_norm));
  }
  res.chi.inherit_structure(f);
  const SurfaceGrid chi_inv = invert(res.chi, "chi");
  const SurfaceGrid mu = right ? lambda1 + lambda0 * chi_inv : lambda1 + chi_inv * lambda0;
  const SurfaceGrid nu = right ? lambda0 + lambda1 * res.chi : lambda0 + res.chi * lambda1;

  const SurfaceGrid none;
  res.second0 = darboux(res.first0.f_sharp, none, mu, side, opts);
  res.second1 = darboux(res.first1.f_sharp, none, nu, side, opts);

  const SurfaceGrid g0_inv = invert(res.second0.g, "g0#");
  const SurfaceGrid g1_inv = invert(res.second1.g, "g1#");
  const SurfaceGrid step0 = res.second0.f_sharp - res.first0.f_sharp;
  const SurfaceGrid step1 = res.second1.f_sharp - res.first1.f_sharp;
  const SurfaceGrid lhs = right ? g0_inv * step0 : step0 * g0_inv;
  const SurfaceGrid rhs = right ? res.chi * g1_inv * step1 : step1 * g1_inv * res.chi;
  const SurfaceGrid diff = lhs - rhs;
  res.relation = grid_report("permutability", {&diff}, positive_or_one(max_node_norm(lhs)),
                             opts.residual);
  return res;
}

SurfaceGrid lambda_recipe(const std::string& name, const SurfaceGrid& f, const SurfaceGrid& N,
                          double c, const std::optional<Multivector>& pin) {
  const int r = f.r;
  if (name == "one") return SurfaceGrid::constant(r, f.shape, Multivector::scalar(r, 1.0));
  if (name == "pin") {
    const Multivector p =
        pin.value_or(Multivector::vector(r, {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}));
    SurfaceGrid g = SurfaceGrid::constant(r, f.shape, p);
    return g.inherit_structure(f);
  }
  if (name == "N") return N;
  if (name == "fN") return f * N;
  if (name == "fN+c") {
    SurfaceGrid g = f * N;
    for (Multivector& x : g.values) x = x.plus_scalar(c);
    return g;
  }
  if (name == "N+c") {
    SurfaceGrid g = N;
    for (Multivector& x : g.values) x = x.plus_scalar(c);
    return g;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown lambda recipe: " + name);
}

}  // namespace cliffsurf
