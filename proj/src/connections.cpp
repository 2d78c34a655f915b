#include "cliffsurf/connections.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "cliffsurf/clifford.hpp"

namespace cliffsurf {

Connection left_connection(const OneFormField& a) {
  auto A = std::make_shared<const OneFormField>(a);
  return {a.r, a.shape, [A](std::size_t k, Axis ax, const Multivector& phi) {
            return (ax == Axis::U ? A->u[k] : A->v[k]) * phi;
          }};
}

Connection right_connection(const OneFormField& b) {
  auto B = std::make_shared<const OneFormField>(b);
  return {b.r, b.shape, [B](std::size_t k, Axis ax, const Multivector& phi) {
            return phi * (ax == Axis::U ? B->u[k] : B->v[k]);
          }};
}

std::vector<Multivector> test_sections(int r, bool full_basis) {
  std::vector<Multivector> out;
  if (full_basis) {
    for (Mask m = 0; m < (Mask{1} << r); ++m) out.push_back(Multivector::blade(r, m));
    return out;
  }
  for (Mask m : {Mask{0}, Mask{1}, Mask{2}, Mask{3}}) out.push_back(Multivector::blade(r, m));
  return out;
}

ResidualReport curvature_residual(std::string name, const Connection& conn, double normalization,
                                  const CurvatureOptions& opts) {
  const GridShape& s = conn.shape;
  const std::size_t n = s.size();
  std::vector<double> worst(n, 0.0);
  for (const Multivector& phi : test_sections(conn.r, opts.full_basis)) {
    std::vector<Multivector> yu(n, Multivector(conn.r)), yv(n, Multivector(conn.r));
    for (std::size_t k = 0; k < n; ++k) {
      yu[k] = conn.apply(k, Axis::U, phi);
      yv[k] = conn.apply(k, Axis::V, phi);
    }
    const auto dyv = partial(yv, s, conn.r, Axis::U);
    const auto dyu = partial(yu, s, conn.r, Axis::V);
    for (std::size_t k = 0; k < n; ++k) {
      const Multivector F =
          dyv[k] - dyu[k] + conn.apply(k, Axis::U, yv[k]) - conn.apply(k, Axis::V, yu[k]);
      worst[k] = std::max(worst[k], F.norm());
    }
  }
  ResidualAccumulator acc(std::move(name), s, opts.residual);
  for (int i = 0; i < s.nu; ++i)
    for (int j = 0; j < s.nv; ++j) acc.add(i, j, worst[s.index(i, j)]);
  return acc.finish(normalization > 0.0 ? normalization : 1.0);
}

Multivector holonomy_u(const Connection& conn, int j, const Multivector& phi) {
  const GridShape& s = conn.shape;
  if (!s.periodic_u) throw Error(ErrorCode::InvalidArgument, "holonomy needs a periodic u axis");
  if (j < 0 || j >= s.nv) throw Error(ErrorCode::OutOfRange, "column outside the grid");
  Multivector x = phi;
  for (int i = 0; i < s.nu; ++i) x = x - conn.apply(s.index(i, j), Axis::U, x) * s.du;
  return x;
}

namespace {

struct PhiData {
  SurfaceGrid f;
  OneFormField phi;
  OneFormField star_phi;
  double scale2 = 1.0;
};

std::shared_ptr<const PhiData> phi_data(const SurfaceGrid& f, PhiVariant variant, bool with_star) {
  auto data = std::make_shared<PhiData>();
  auto [phi, phit] = phi_fields(f);
  data->f = f;
  data->phi = variant == PhiVariant::Phi ? std::move(phi) : std::move(phit);
  if (with_star) data->star_phi = hodge_star(data->phi, f);
  const double m = max_node_norm(differential(f));
  data->scale2 = m > 0.0 ? m * m : 1.0;
  return data;
}

const Multivector& comp(const OneFormField& w, std::size_t k, Axis ax) {
  return ax == Axis::U ? w.u[k] : w.v[k];
}

double variant_sign(PhiVariant v) { return v == PhiVariant::Phi ? -1.0 : 1.0; }

ConnectionSample make_sample(SampleKind kind, PhiVariant variant, double p0, double p1,
                             const Connection& conn, double scale2, const CurvatureOptions& opts) {
  ConnectionSample s;
  s.kind = kind;
  s.variant = variant;
  s.p0 = p0;
  s.p1 = p1;
  std::string name = std::string(to_string(kind)) + "(" + std::to_string(p0) + "," +
                     std::to_string(p1) + ")/" + std::string(to_string(variant));
  s.curvature = curvature_residual(std::move(name), conn, scale2, opts);
  return s;
}

}  // namespace

Connection lambda_connection(const SurfaceGrid& f, double x, double y, PhiVariant variant) {
  auto d = phi_data(f, variant, false);
  const double base = variant_sign(variant) + x;
  return {f.r, f.shape, [d, base, y](std::size_t k, Axis ax, const Multivector& phi) {
            const Multivector p = comp(d->phi, k, ax) * phi;
            return p * base + (d->f.values[k] * p) * y;
          }};
}

Connection sigma_connection(const SurfaceGrid& f, double a, double b, PhiVariant variant) {
  const double q = a * a + b * b;
  if (!(q > 1e-14)) throw Error(ErrorCode::SigmaZero, "sigma must be nonzero");
  auto d = phi_data(f, variant, false);
  const int r = f.r;
  const Multivector e1 = Multivector::blade(r, 1);
  const Multivector sigma = Multivector::scalar(r, a) + e1 * b;
  const Multivector sigma_inv = (Multivector::scalar(r, a) - e1 * b) / q;
  const double sign = variant_sign(variant);
  return {r, f.shape, [d, e1, sigma, sigma_inv, sign](std::size_t k, Axis ax,
                                                      const Multivector& phi) {
            const Multivector p = comp(d->phi, k, ax) * phi;
            const Multivector fpe = d->f.values[k] * p * e1;
            return p * sign + (p - fpe) * sigma * 0.5 + (p + fpe) * sigma_inv * 0.5;
          }};
}

Connection theta_connection(const SurfaceGrid& f, double theta, PhiVariant variant) {
  auto d = phi_data(f, variant, true);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double sign = variant_sign(variant);
  return {f.r, f.shape, [d, c, s, sign](std::size_t k, Axis ax, const Multivector& phi) {
            const Multivector p = comp(d->phi, k, ax) * phi;
            return p * (sign - c) + (comp(d->star_phi, k, ax) * phi) * s;
          }};
}

std::pair<double, double> theta_to_lambda(double theta, PhiVariant variant) {
  const double y = std::sin(theta);
  return {-std::cos(theta), variant == PhiVariant::Phi ? y : -y};
}

ConnectionSample lambda_connection_curvature(const SurfaceGrid& f, double x, double y,
                                             PhiVariant variant, const CurvatureOptions& opts) {
  const Connection c = lambda_connection(f, x, y, variant);
  return make_sample(SampleKind::LambdaXY, variant, x, y, c,
                     phi_data(f, variant, false)->scale2, opts);
}

ConnectionSample sigma_connection_curvature(const SurfaceGrid& f, double a, double b,
                                            PhiVariant variant, const CurvatureOptions& opts) {
  const Connection c = sigma_connection(f, a, b, variant);
  return make_sample(SampleKind::Sigma, variant, a, b, c, phi_data(f, variant, false)->scale2,
                     opts);
}

ConnectionSample theta_connection_curvature(const SurfaceGrid& f, double theta,
                                            PhiVariant variant, const CurvatureOptions& opts) {
  const Connection c = theta_connection(f, theta, variant);
  return make_sample(SampleKind::Theta, variant, theta, 0.0, c,
                     phi_data(f, variant, false)->scale2, opts);
}

std::vector<ConnectionSample> tt_star_sweep(const SurfaceGrid& f, int n_theta, PhiVariant variant,
                                            const CurvatureOptions& opts) {
  if (n_theta < 4) throw Error(ErrorCode::InvalidArgument, "tt* sweep needs n_theta >= 4");
  std::vector<ConnectionSample> out;
  for (int k = 0; k < n_theta; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_theta;
    out.push_back(theta_connection_curvature(f, theta, variant, opts));
  }
  return out;
}

ConnectionSample evaluate_sample(const SurfaceGrid& f, const SweepRequest& req,
                                 const CurvatureOptions& opts) {
  switch (req.kind) {
    case SampleKind::LambdaXY:
      return lambda_connection_curvature(f, req.p0, req.p1, req.variant, opts);
    case SampleKind::Sigma:
      return sigma_connection_curvature(f, req.p0, req.p1, req.variant, opts);
    case SampleKind::Theta: return theta_connection_curvature(f, req.p0, req.variant, opts);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown sample kind");
}

std::vector<SweepRequest> unit_circle_samples(int n, PhiVariant variant) {
  std::vector<SweepRequest> out;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.5) / n;
    out.push_back({SampleKind::LambdaXY, variant, std::cos(t), std::sin(t)});
  }
  return out;
}

std::vector<SweepRequest> sigma_samples(int n, PhiVariant variant) {
  static constexpr double kMods[] = {0.5, 1.0, 2.0};
  std::vector<SweepRequest> out;
  for (int k = 0; k < n; ++k) {
    const double rho = kMods[k % 3];
    const double t = 2.0 * std::numbers::pi * k / n + 0.3;
    out.push_back({SampleKind::Sigma, variant, rho * std::cos(t), rho * std::sin(t)});
  }
  return out;
}

std::string_view to_string(SampleKind kind) {
  switch (kind) {
    case SampleKind::LambdaXY: return "lambda_xy";
    case SampleKind::Sigma: return "sigma";
    case SampleKind::Theta: return "theta";
  }
  return "unknown";
}

std::string_view to_string(PhiVariant variant) {
  return variant == PhiVariant::Phi ? "Phi" : "PhiTilde";
}

}  // namespace cliffsurf
