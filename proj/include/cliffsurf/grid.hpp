#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cliffsurf/multivector.hpp"

namespace cliffsurf {

// Node (i, j) sits at (u0 + i du, v0 + j dv). On periodic axes the node at the
// period end is omitted.
struct GridShape {
  int nu = 0;
  int nv = 0;
  double du = 1.0;
  double dv = 1.0;
  double u0 = 0.0;
  double v0 = 0.0;
  bool periodic_u = false;
  bool periodic_v = false;

  std::size_t size() const noexcept { return static_cast<std::size_t>(nu) * nv; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * nv + static_cast<std::size_t>(j);
  }
  double u(int i) const noexcept { return u0 + i * du; }
  double v(int j) const noexcept { return v0 + j * dv; }
  double h() const noexcept { return du > dv ? du : dv; }
  // Same node layout; periodic flags may differ.
  bool compatible(const GridShape& o) const noexcept;
  // Intersection of periodicity (a cut axis stays cut).
  GridShape joined(const GridShape& o) const;
};

void check_shape(const GridShape& s);

// Per-node first fundamental form E, F, G and area density W = sqrt(EG - F^2).
struct MetricField {
  GridShape shape;
  std::vector<double> E, F, G, W;

  static MetricField flat(const GridShape& shape);
  static MetricField from_efg(const GridShape& shape, std::vector<double> E, std::vector<double> F,
                              std::vector<double> G);
};

// Sampled map from the parameter grid into Cl(V_r). `structure` is the conformal
// structure of the parameter domain; when absent the coordinates are isothermal.
struct SurfaceGrid {
  int r = kMinDimension;
  GridShape shape;
  std::vector<Multivector> values;
  std::optional<MetricField> structure;

  SurfaceGrid() = default;
  SurfaceGrid(int r_, const GridShape& shape_);
  static SurfaceGrid constant(int r, const GridShape& shape, const Multivector& value);

  Multivector& at(int i, int j) { return values[shape.index(i, j)]; }
  const Multivector& at(int i, int j) const { return values[shape.index(i, j)]; }

  MetricField conformal_structure() const;
  // Copy of this grid's structure onto another grid sharing its parameter domain.
  SurfaceGrid& inherit_structure(const SurfaceGrid& from);
};

// omega = u du + v dv
struct OneFormField {
  int r = kMinDimension;
  GridShape shape;
  std::vector<Multivector> u;
  std::vector<Multivector> v;

  OneFormField() = default;
  OneFormField(int r_, const GridShape& shape_);
};

// density du ^ dv
struct TwoFormField {
  int r = kMinDimension;
  GridShape shape;
  std::vector<Multivector> density;

  TwoFormField() = default;
  TwoFormField(int r_, const GridShape& shape_);
};

struct ResidualReport {
  std::string name;
  double max_norm = 0.0;
  double mean_norm = 0.0;
  int nu = 0;
  int nv = 0;
  std::size_t measured = 0;
  std::size_t masked = 0;
  std::string notes;
  // Per-node values (NaN where masked); filled only on request.
  std::vector<double> node_values;
};

// Controls which nodes count towards a residual maximum.
struct ResidualOptions {
  // Nodes closer than this to a non-periodic edge are excluded; nested
  // one-sided stencils are only first-order accurate there.
  int boundary_margin = 3;
  // Nodes whose area density falls below this are masked (branch points).
  double degenerate_tol = 1e-10;
  bool keep_node_values = false;
};

// Accumulates per-node residual values into a report.
class ResidualAccumulator {
 public:
  ResidualAccumulator(std::string name, const GridShape& shape, const ResidualOptions& opts);

  bool in_interior(int i, int j) const noexcept;
  void add(int i, int j, double value);
  void mask(int i, int j);
  ResidualReport finish(double normalization, std::string notes = {}) const;

 private:
  std::string name_;
  GridShape shape_;
  ResidualOptions opts_;
  std::vector<double> values_;
  std::vector<unsigned char> state_;  // 0 unset, 1 measured, 2 masked
};

// Nodewise field algebra. Shapes must be compatible; periodicity is intersected.
SurfaceGrid operator+(const SurfaceGrid& a, const SurfaceGrid& b);
SurfaceGrid operator-(const SurfaceGrid& a, const SurfaceGrid& b);
SurfaceGrid operator*(const SurfaceGrid& a, const SurfaceGrid& b);
SurfaceGrid operator*(const SurfaceGrid& a, const Multivector& c);
SurfaceGrid operator*(const Multivector& c, const SurfaceGrid& a);
SurfaceGrid operator*(double s, const SurfaceGrid& a);

OneFormField operator+(const OneFormField& a, const OneFormField& b);
OneFormField operator-(const OneFormField& a, const OneFormField& b);
OneFormField operator*(double s, const OneFormField& a);
OneFormField operator*(const SurfaceGrid& a, const OneFormField& w);
OneFormField operator*(const OneFormField& w, const SurfaceGrid& a);
OneFormField operator*(const Multivector& c, const OneFormField& w);
OneFormField operator*(const OneFormField& w, const Multivector& c);

TwoFormField operator+(const TwoFormField& a, const TwoFormField& b);
TwoFormField operator-(const TwoFormField& a, const TwoFormField& b);
TwoFormField operator*(const SurfaceGrid& a, const TwoFormField& w);

// (w ^ z)(d_u, d_v) = w_u z_v - w_v z_u
TwoFormField wedge(const OneFormField& w, const OneFormField& z);

// Nodewise helpers.
SurfaceGrid inverse_in_E(const SurfaceGrid& a);
SurfaceGrid conjugate(const SurfaceGrid& a);
SurfaceGrid grade_project(const SurfaceGrid& a, int k);

// max over nodes of max(|w_u|, |w_v|)
double max_node_norm(const OneFormField& w);
double max_node_norm(const SurfaceGrid& a);
double node_norm(const OneFormField& w, std::size_t k);

}  // namespace cliffsurf
