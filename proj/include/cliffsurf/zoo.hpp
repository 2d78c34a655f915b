#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "cliffsurf/grid.hpp"

namespace cliffsurf {

enum class SurfaceKind { Plane, RoundSphere, Catenoid, Helicoid, CliffordTorus, Lawson, Graph };

std::string_view to_string(SurfaceKind kind);
std::optional<SurfaceKind> surface_kind_from_string(std::string_view name);

struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::Plane;
  std::map<std::string, double> params;
  int nu = 32;
  int nv = 32;
  // [u0, u1, v0, v1]; surface default when absent.
  std::optional<std::array<double, 4>> domain;
  std::optional<bool> periodic_u;
  std::optional<bool> periodic_v;
};

// Periodic axes omit the node at the period end.
GridShape make_shape(int nu, int nv, const std::array<double, 4>& domain, bool periodic_u,
                     bool periodic_v);

// Fills a grid from a closed-form map.
SurfaceGrid sample(int r, const GridShape& shape,
                   const std::function<Multivector(double, double)>& fn);

// Surfaces:
//   plane          u e1 + v e2 on [0,1]^2
//   graph          u e1 + v e2 + a (u^2 - v^2)/2 e3 on [-1,1]^2 (a = 0.5)
//   round_sphere   (sin u cos v, sin u sin v, cos u), u in [pi/6, 5pi/6], v periodic
//   catenoid       (cosh v cos u, cosh v sin u, v), u periodic, v in [-1,1]
//   helicoid       (-sinh v sin u, sinh v cos u, -u): its differential is -*d(catenoid)
//   clifford_torus (cos u, sin u, cos v, sin v)/sqrt 2, both axes periodic
//   lawson         (cos mx cos y, sin mx cos y, cos kx sin y, sin kx sin y), both periodic
// Non-isothermal surfaces carry their analytic conformal structure.
SurfaceGrid generate(const SurfaceSpec& spec);
SurfaceGrid generate(SurfaceKind kind, int n, std::map<std::string, double> params = {});

// u e1 + (u + v) e2 with the flat structure: not conformal.
SurfaceGrid sheared_plane(int nu, int nv);
// Clifford torus pushed off itself and renormalized to S^3: not harmonic.
SurfaceGrid perturbed_torus(int nu, int nv, double eps = 0.2);
// (cos u^2, sin u^2, 0): a rank-one, non-harmonic sweep of a great circle.
SurfaceGrid curve_sweep(int nu, int nv);

}  // namespace cliffsurf
