#include "cliffsurf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cliffsurf/clifford.hpp"

namespace cliffsurf {

bool GridShape::compatible(const GridShape& o) const noexcept {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  return nu == o.nu && nv == o.nv && close(du, o.du) && close(dv, o.dv);
}

GridShape GridShape::joined(const GridShape& o) const {
  if (!compatible(o)) {
    throw Error(ErrorCode::ShapeMismatch, "grid shapes differ: " + std::to_string(nu) + "x" +
                                              std::to_string(nv) + " vs " + std::to_string(o.nu) +
                                              "x" + std::to_string(o.nv));
  }
  GridShape s = *this;
  s.periodic_u = periodic_u && o.periodic_u;
  s.periodic_v = periodic_v && o.periodic_v;
  return s;
}

void check_shape(const GridShape& s) {
  if (s.nu < 1 || s.nv < 1) throw Error(ErrorCode::GridTooSmall, "grid must have nodes");
  if (!(s.du > 0.0) || !(s.dv > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid spacings must be positive");
  }
}

MetricField MetricField::flat(const GridShape& shape) {
  const std::size_t n = shape.size();
  return {shape, std::vector<double>(n, 1.0), std::vector<double>(n, 0.0),
          std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)};
}

MetricField MetricField::from_efg(const GridShape& shape, std::vector<double> E,
                                  std::vector<double> F, std::vector<double> G) {
  const std::size_t n = shape.size();
  if (E.size() != n || F.size() != n || G.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "metric arrays do not match the grid");
  }
  std::vector<double> W(n);
  for (std::size_t k = 0; k < n; ++k) W[k] = std::sqrt(std::max(0.0, E[k] * G[k] - F[k] * F[k]));
  return {shape, std::move(E), std::move(F), std::move(G), std::move(W)};
}

SurfaceGrid::SurfaceGrid(int r_, const GridShape& shape_)
    : r(r_), shape(shape_), values(shape_.size(), Multivector(r_)) {
  check_shape(shape);
}

SurfaceGrid SurfaceGrid::constant(int r, const GridShape& shape, const Multivector& value) {
  SurfaceGrid g(r, shape);
  std::fill(g.values.begin(), g.values.end(), value);
  return g;
}

MetricField SurfaceGrid::conformal_structure() const {
  if (structure) return *structure;
  return MetricField::flat(shape);
}

SurfaceGrid& SurfaceGrid::inherit_structure(const SurfaceGrid& from) {
  if (from.structure) {
    structure = *from.structure;
    structure->shape = shape;
  } else {
    structure.reset();
  }
  return *this;
}

OneFormField::OneFormField(int r_, const GridShape& shape_)
    : r(r_), shape(shape_), u(shape_.size(), Multivector(r_)), v(shape_.size(), Multivector(r_)) {}

TwoFormField::TwoFormField(int r_, const GridShape& shape_)
    : r(r_), shape(shape_), density(shape_.size(), Multivector(r_)) {}

ResidualAccumulator::ResidualAccumulator(std::string name, const GridShape& shape,
                                         const ResidualOptions& opts)
    : name_(std::move(name)),
      shape_(shape),
      opts_(opts),
      values_(shape.size(), 0.0),
      state_(shape.size(), 0) {}

bool ResidualAccumulator::in_interior(int i, int j) const noexcept {
  const int m = opts_.boundary_margin;
  if (!shape_.periodic_u && (i < m || i >= shape_.nu - m)) return false;
  if (!shape_.periodic_v && (j < m || j >= shape_.nv - m)) return false;
  return true;
}

void ResidualAccumulator::add(int i, int j, double value) {
  const std::size_t k = shape_.index(i, j);
  if (state_[k] == 2) return;
  values_[k] = value;
  state_[k] = 1;
}

void ResidualAccumulator::mask(int i, int j) { state_[shape_.index(i, j)] = 2; }

ResidualReport ResidualAccumulator::finish(double normalization, std::string notes) const {
  ResidualReport rep;
  rep.name = name_;
  rep.nu = shape_.nu;
  rep.nv = shape_.nv;
  const double scale = normalization > 0.0 ? normalization : 1.0;
  double sum = 0.0;
  if (opts_.keep_node_values) {
    rep.node_values.assign(shape_.size(), std::numeric_limits<double>::quiet_NaN());
  }
  for (int i = 0; i < shape_.nu; ++i) {
    for (int j = 0; j < shape_.nv; ++j) {
      const std::size_t k = shape_.index(i, j);
      if (state_[k] == 2) {
        ++rep.masked;
        continue;
      }
      if (state_[k] != 1) continue;
      const double val = values_[k] / scale;
      if (opts_.keep_node_values) rep.node_values[k] = val;
      if (!in_interior(i, j)) continue;
      rep.max_norm = std::max(rep.max_norm, val);
      sum += val;
      ++rep.measured;
    }
  }
  rep.mean_norm = rep.measured ? sum / static_cast<double>(rep.measured) : 0.0;
  rep.notes = std::move(notes);
  if (rep.masked) {
    if (!rep.notes.empty()) rep.notes += "; ";
    rep.notes += std::to_string(rep.masked) + " degenerate nodes masked";
  }
  return rep;
}

namespace {

template <class Fn>
SurfaceGrid combine_grids(const SurfaceGrid& a, const SurfaceGrid& b, Fn fn) {
  if (a.r != b.r) throw Error(ErrorCode::DimensionMismatch, "grid r mismatch");
  SurfaceGrid out(a.r, a.shape.joined(b.shape));
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = fn(a.values[k], b.values[k]);
  out.structure = a.structure ? a.structure : b.structure;
  if (out.structure) out.structure->shape = out.shape;
  return out;
}

template <class Fn>
SurfaceGrid map_grid(const SurfaceGrid& a, Fn fn) {
  SurfaceGrid out(a.r, a.shape);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = fn(a.values[k]);
  out.structure = a.structure;
  return out;
}

template <class Fn>
OneFormField map_form(const OneFormField& w, Fn fn) {
  OneFormField out(w.r, w.shape);
  for (std::size_t k = 0; k < w.u.size(); ++k) {
    out.u[k] = fn(w.u[k], k);
    out.v[k] = fn(w.v[k], k);
  }
  return out;
}

template <class Fn>
OneFormField combine_forms(const OneFormField& a, const OneFormField& b, Fn fn) {
  if (a.r != b.r) throw Error(ErrorCode::DimensionMismatch, "form r mismatch");
  OneFormField out(a.r, a.shape.joined(b.shape));
  for (std::size_t k = 0; k < a.u.size(); ++k) {
    out.u[k] = fn(a.u[k], b.u[k]);
    out.v[k] = fn(a.v[k], b.v[k]);
  }
  return out;
}

void check_r(int a, int b) {
  if (a != b) throw Error(ErrorCode::DimensionMismatch, "field r mismatch");
}

}  // namespace

SurfaceGrid operator+(const SurfaceGrid& a, const SurfaceGrid& b) {
  return combine_grids(a, b, [](const Multivector& x, const Multivector& y) { return x + y; });
}

SurfaceGrid operator-(const SurfaceGrid& a, const SurfaceGrid& b) {
  return combine_grids(a, b, [](const Multivector& x, const Multivector& y) { return x - y; });
}

SurfaceGrid operator*(const SurfaceGrid& a, const SurfaceGrid& b) {
  return combine_grids(a, b, [](const Multivector& x, const Multivector& y) { return x * y; });
}

SurfaceGrid operator*(const SurfaceGrid& a, const Multivector& c) {
  return map_grid(a, [&](const Multivector& x) { return x * c; });
}

SurfaceGrid operator*(const Multivector& c, const SurfaceGrid& a) {
  return map_grid(a, [&](const Multivector& x) { return c * x; });
}

SurfaceGrid operator*(double s, const SurfaceGrid& a) {
  return map_grid(a, [s](const Multivector& x) { return s * x; });
}

OneFormField operator+(const OneFormField& a, const OneFormField& b) {
  return combine_forms(a, b, [](const Multivector& x, const Multivector& y) { return x + y; });
}

OneFormField operator-(const OneFormField& a, const OneFormField& b) {
  return combine_forms(a, b, [](const Multivector& x, const Multivector& y) { return x - y; });
}

OneFormField operator*(double s, const OneFormField& a) {
  return map_form(a, [s](const Multivector& x, std::size_t) { return s * x; });
}

OneFormField operator*(const SurfaceGrid& a, const OneFormField& w) {
  check_r(a.r, w.r);
  OneFormField out = map_form(w, [&](const Multivector& x, std::size_t k) { return a.values[k] * x; });
  out.shape = a.shape.joined(w.shape);
  return out;
}

OneFormField operator*(const OneFormField& w, const SurfaceGrid& a) {
  check_r(a.r, w.r);
  OneFormField out = map_form(w, [&](const Multivector& x, std::size_t k) { return x * a.values[k]; });
  out.shape = a.shape.joined(w.shape);
  return out;
}

OneFormField operator*(const Multivector& c, const OneFormField& w) {
  return map_form(w, [&](const Multivector& x, std::size_t) { return c * x; });
}

OneFormField operator*(const OneFormField& w, const Multivector& c) {
  return map_form(w, [&](const Multivector& x, std::size_t) { return x * c; });
}

TwoFormField operator+(const TwoFormField& a, const TwoFormField& b) {
  check_r(a.r, b.r);
  TwoFormField out(a.r, a.shape.joined(b.shape));
  for (std::size_t k = 0; k < a.density.size(); ++k) out.density[k] = a.density[k] + b.density[k];
  return out;
}

TwoFormField operator-(const TwoFormField& a, const TwoFormField& b) {
  check_r(a.r, b.r);
  TwoFormField out(a.r, a.shape.joined(b.shape));
  for (std::size_t k = 0; k < a.density.size(); ++k) out.density[k] = a.density[k] - b.density[k];
  return out;
}

TwoFormField operator*(const SurfaceGrid& a, const TwoFormField& w) {
  check_r(a.r, w.r);
  TwoFormField out(a.r, a.shape.joined(w.shape));
  for (std::size_t k = 0; k < w.density.size(); ++k) out.density[k] = a.values[k] * w.density[k];
  return out;
}

TwoFormField wedge(const OneFormField& w, const OneFormField& z) {
  check_r(w.r, z.r);
  TwoFormField out(w.r, w.shape.joined(z.shape));
  for (std::size_t k = 0; k < w.u.size(); ++k) {
    out.density[k] = w.u[k] * z.v[k] - w.v[k] * z.u[k];
  }
  return out;
}

SurfaceGrid inverse_in_E(const SurfaceGrid& a) {
  return map_grid(a, [](const Multivector& x) { return inverse_in_E(x); });
}

SurfaceGrid conjugate(const SurfaceGrid& a) {
  return map_grid(a, [](const Multivector& x) { return conjugate(x); });
}

SurfaceGrid grade_project(const SurfaceGrid& a, int k) {
  return map_grid(a, [k](const Multivector& x) { return grade_project(x, k); });
}

double node_norm(const OneFormField& w, std::size_t k) {
  return std::max(w.u[k].norm(), w.v[k].norm());
}

double max_node_norm(const OneFormField& w) {
  double m = 0.0;
  for (std::size_t k = 0; k < w.u.size(); ++k) m = std::max(m, node_norm(w, k));
  return m;
}

double max_node_norm(const SurfaceGrid& a) {
  double m = 0.0;
  for (const auto& x : a.values) m = std::max(m, x.norm());
  return m;
}

}  // namespace cliffsurf
