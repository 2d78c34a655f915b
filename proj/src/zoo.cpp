#include "cliffsurf/zoo.hpp"

#include <cmath>
#include <numbers>

#include "cliffsurf/clifford.hpp"

namespace cliffsurf {

namespace {

constexpr double kPi = std::numbers::pi;

struct Defaults {
  int r;
  std::array<double, 4> domain;
  bool periodic_u;
  bool periodic_v;
};

Defaults defaults_for(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::Plane: return {3, {0.0, 1.0, 0.0, 1.0}, false, false};
    case SurfaceKind::Graph: return {3, {-1.0, 1.0, -1.0, 1.0}, false, false};
    case SurfaceKind::RoundSphere: return {3, {kPi / 6.0, 5.0 * kPi / 6.0, 0.0, 2.0 * kPi}, false, true};
    case SurfaceKind::Catenoid: return {3, {0.0, 2.0 * kPi, -1.0, 1.0}, true, false};
    case SurfaceKind::Helicoid: return {3, {0.0, 2.0 * kPi, -1.0, 1.0}, false, false};
    case SurfaceKind::CliffordTorus: return {4, {0.0, 2.0 * kPi, 0.0, 2.0 * kPi}, true, true};
    case SurfaceKind::Lawson: return {4, {0.0, 2.0 * kPi, 0.0, 2.0 * kPi}, true, true};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown surface");
}

double param(const SurfaceSpec& spec, const std::string& name, double fallback) {
  auto it = spec.params.find(name);
  return it == spec.params.end() ? fallback : it->second;
}

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

// Analytic E, F, G sampled at the nodes.
template <class Fn>
MetricField analytic_metric(const GridShape& s, Fn efg) {
  std::vector<double> E(s.size()), F(s.size()), G(s.size());
  for (int i = 0; i < s.nu; ++i) {
    for (int j = 0; j < s.nv; ++j) {
      const auto [e, f, g] = efg(s.u(i), s.v(j));
      const std::size_t k = s.index(i, j);
      E[k] = e;
      F[k] = f;
      G[k] = g;
    }
  }
  return MetricField::from_efg(s, std::move(E), std::move(F), std::move(G));
}

}  // namespace

std::string_view to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::Plane: return "plane";
    case SurfaceKind::RoundSphere: return "round_sphere";
    case SurfaceKind::Catenoid: return "catenoid";
    case SurfaceKind::Helicoid: return "helicoid";
    case SurfaceKind::CliffordTorus: return "clifford_torus";
    case SurfaceKind::Lawson: return "lawson";
    case SurfaceKind::Graph: return "graph";
  }
  return "unknown";
}

std::optional<SurfaceKind> surface_kind_from_string(std::string_view name) {
  for (SurfaceKind k : {SurfaceKind::Plane, SurfaceKind::RoundSphere, SurfaceKind::Catenoid,
                        SurfaceKind::Helicoid, SurfaceKind::CliffordTorus, SurfaceKind::Lawson,
                        SurfaceKind::Graph}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

GridShape make_shape(int nu, int nv, const std::array<double, 4>& domain, bool periodic_u,
                     bool periodic_v) {
  const double lu = domain[1] - domain[0];
  const double lv = domain[3] - domain[2];
  if (!(lu > 0.0) || !(lv > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "domain lengths must be positive");
  }
  if (nu < 2 || nv < 2) throw Error(ErrorCode::GridTooSmall, "need at least 2 nodes per axis");
  GridShape s;
  s.nu = nu;
  s.nv = nv;
  s.u0 = domain[0];
  s.v0 = domain[2];
  s.periodic_u = periodic_u;
  s.periodic_v = periodic_v;
  s.du = lu / (periodic_u ? nu : nu - 1);
  s.dv = lv / (periodic_v ? nv : nv - 1);
  return s;
}

SurfaceGrid sample(int r, const GridShape& shape,
                   const std::function<Multivector(double, double)>& fn) {
  SurfaceGrid g(r, shape);
  for (int i = 0; i < shape.nu; ++i) {
    for (int j = 0; j < shape.nv; ++j) g.at(i, j) = fn(shape.u(i), shape.v(j));
  }
  return g;
}

SurfaceGrid generate(const SurfaceSpec& spec) {
  if (spec.nu < 8 || spec.nv < 8) {
    throw Error(ErrorCode::GridTooSmall, "surface grids need at least 8 nodes per axis");
  }
  const Defaults d = defaults_for(spec.kind);
  const GridShape s = make_shape(spec.nu, spec.nv, spec.domain.value_or(d.domain),
                                 spec.periodic_u.value_or(d.periodic_u),
                                 spec.periodic_v.value_or(d.periodic_v));
  const int r = d.r;
  auto vec = [r](std::initializer_list<double> c) { return Multivector::vector(r, c); };

  switch (spec.kind) {
    case SurfaceKind::Plane:
      return sample(r, s, [&](double u, double v) { return vec({u, v, 0.0}); });

    case SurfaceKind::Graph: {
      const double a = param(spec, "a", 0.5);
      SurfaceGrid g = sample(r, s, [&](double u, double v) {
        return vec({u, v, 0.5 * a * (u * u - v * v)});
      });
      g.structure = analytic_metric(s, [a](double u, double v) {
        return std::array<double, 3>{1.0 + a * a * u * u, -a * a * u * v, 1.0 + a * a * v * v};
      });
      return g;
    }

    case SurfaceKind::RoundSphere: {
      SurfaceGrid g = sample(r, s, [&](double u, double v) {
        return vec({std::sin(u) * std::cos(v), std::sin(u) * std::sin(v), std::cos(u)});
      });
      g.structure = analytic_metric(s, [](double u, double) {
        const double su = std::sin(u);
        return std::array<double, 3>{1.0, 0.0, su * su};
      });
      return g;
    }

    case SurfaceKind::Catenoid:
      return sample(r, s, [&](double u, double v) {
        return vec({std::cosh(v) * std::cos(u), std::cosh(v) * std::sin(u), v});
      });

    case SurfaceKind::Helicoid:
      return sample(r, s, [&](double u, double v) {
        return vec({-std::sinh(v) * std::sin(u), std::sinh(v) * std::cos(u), -u});
      });

    case SurfaceKind::CliffordTorus: {
      const double c = 1.0 / std::numbers::sqrt2;
      return sample(r, s, [&](double u, double v) {
        return vec({c * std::cos(u), c * std::sin(u), c * std::cos(v), c * std::sin(v)});
      });
    }

    case SurfaceKind::Lawson: {
      const double m = param(spec, "m", 2.0);
      const double k = param(spec, "k", 1.0);
      if (!is_integer(m) || !is_integer(k) || !(m > k) || k < 1.0) {
        throw Error(ErrorCode::InvalidArgument, "lawson needs integers m > k >= 1");
      }
      SurfaceGrid g = sample(r, s, [&](double x, double y) {
        return vec({std::cos(m * x) * std::cos(y), std::sin(m * x) * std::cos(y),
                    std::cos(k * x) * std::sin(y), std::sin(k * x) * std::sin(y)});
      });
      g.structure = analytic_metric(s, [m, k](double, double y) {
        const double c = std::cos(y), sn = std::sin(y);
        return std::array<double, 3>{m * m * c * c + k * k * sn * sn, 0.0, 1.0};
      });
      return g;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown surface");
}

SurfaceGrid generate(SurfaceKind kind, int n, std::map<std::string, double> params) {
  SurfaceSpec spec;
  spec.kind = kind;
  spec.nu = n;
  spec.nv = n;
  spec.params = std::move(params);
  return generate(spec);
}

SurfaceGrid sheared_plane(int nu, int nv) {
  const GridShape s = make_shape(nu, nv, {0.0, 1.0, 0.0, 1.0}, false, false);
  return sample(3, s, [](double u, double v) { return Multivector::vector(3, {u, u + v, 0.0}); });
}

SurfaceGrid perturbed_torus(int nu, int nv, double eps) {
  const GridShape s = make_shape(nu, nv, {0.0, 2.0 * kPi, 0.0, 2.0 * kPi}, true, true);
  const double c = 1.0 / std::numbers::sqrt2;
  return sample(4, s, [&](double u, double v) {
    Multivector p = Multivector::vector(
        4, {c * std::cos(u) + eps * std::sin(u) * std::sin(v), c * std::sin(u), c * std::cos(v),
            c * std::sin(v) + eps * std::cos(2.0 * u)});
    return p / p.norm();
  });
}

SurfaceGrid curve_sweep(int nu, int nv) {
  const GridShape s = make_shape(nu, nv, {0.5, 2.0, 0.0, 1.0}, false, false);
  return sample(3, s, [](double u, double) {
    return Multivector::vector(3, {std::cos(u * u), std::sin(u * u), 0.0});
  });
}

}  // namespace cliffsurf
