#include "cliffsurf/duality.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "cliffsurf/clifford.hpp"

namespace cliffsurf {

namespace {

double h2(const GridShape& s) { return s.h() * s.h(); }

double positive_or_one(double x) { return x > 0.0 ? x : 1.0; }

int next_dimension(int r) { return r * (r - 1) / 2; }

ResidualReport worst_of(std::string name, const std::vector<const ResidualReport*>& reports) {
  ResidualReport out;
  out.name = std::move(name);
  for (const ResidualReport* r : reports) {
    if (r->max_norm >= out.max_norm) {
      const std::string keep = out.name;
      out = *r;
      out.name = keep;
    }
    out.mean_norm = std::max(out.mean_norm, r->mean_norm);
  }
  return out;
}

}  // namespace

SurfaceGrid polar_dual(const SurfaceGrid& f, const SurfaceGrid& N, const DualityOptions& opts) {
  require_sphere_valued(f, true, opts.sphere_tol);
  const double tol = opts.commutator_tol.value_or(std::max(1e-9, 50.0 * h2(f.shape)));
  const SurfaceGrid fN = f * N;
  const SurfaceGrid Nf = N * f;
  for (std::size_t k = 0; k < fN.values.size(); ++k) {
    const double c = (fN.values[k] - Nf.values[k]).norm();
    if (c > tol) {
      throw Error(ErrorCode::CommutatorNonzero,
                  "|fN - Nf| = " + std::to_string(c) + " at node " + std::to_string(k));
    }
  }
  SurfaceGrid out = fN;
  out.inherit_structure(f);
  return out;
}

ResidualReport polar_dual_residual(const SurfaceGrid& P, const SurfaceGrid& N,
                                   const SurfaceGrid& domain, const ResidualOptions& opts) {
  const OneFormField dP = differential(P);
  const OneFormField s = hodge_star(dP, domain);
  const OneFormField a = s + N * dP;
  const OneFormField b = s - dP * N;
  return form_report("polar_dual", {&a, &b}, positive_or_one(max_node_norm(dP)), opts);
}

int pair_index(int i, int j, int r) {
  if (!(0 <= i && i < j && j < r)) throw Error(ErrorCode::OutOfRange, "pair index needs i < j < r");
  // Pairs (0,1..r-1), (1,2..r-1), ...
  return i * (2 * r - i - 1) / 2 + (j - i - 1);
}

Multivector bipolar_reindex(const Multivector& b, double tol) {
  const int r = b.r();
  const int rn = next_dimension(r);
  if (rn > kMaxSequenceDimension) {
    throw Error(ErrorCode::RCapExceeded, "bipolar reindex of r = " + std::to_string(r) +
                                             " needs r = " + std::to_string(rn));
  }
  std::vector<Term> terms;
  for (const Term& t : b.terms()) {
    if (std::popcount(t.mask) != 2) {
      if (std::abs(t.coeff) > tol) {
        throw Error(ErrorCode::NotGrade2, "component of grade " +
                                              std::to_string(std::popcount(t.mask)) +
                                              " with coefficient " + std::to_string(t.coeff));
      }
      continue;
    }
    const int i = std::countr_zero(t.mask);
    const int j = std::bit_width(t.mask) - 1;
    terms.push_back({Mask{1} << pair_index(i, j, r), t.coeff});
  }
  return Multivector::from_terms(rn, std::move(terms));
}

SurfaceGrid bipolar_reindex(const SurfaceGrid& N, double tol) {
  const int rn = next_dimension(N.r);
  if (rn > kMaxSequenceDimension) {
    throw Error(ErrorCode::RCapExceeded, "bipolar reindex of r = " + std::to_string(N.r) +
                                             " needs r = " + std::to_string(rn));
  }
  SurfaceGrid out(rn, N.shape);
  for (std::size_t k = 0; k < N.values.size(); ++k) {
    const double q = quad_form(N.values[k]);
    if (std::abs(q - 1.0) > tol) {
      throw Error(ErrorCode::NotSphereValued,
                  "bipolar input not unit at node " + std::to_string(k) + " (Q = " +
                      std::to_string(q) + ")");
    }
    out.values[k] = bipolar_reindex(N.values[k], tol);
  }
  out.structure = N.structure;
  return out;
}

SpanRank span_rank(const SurfaceGrid& f, double rel_threshold) {
  const int r = f.r;
  const auto n = static_cast<Eigen::Index>(f.values.size());
  Eigen::MatrixXd X(n, r);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (int i = 0; i < r; ++i) X(k, i) = f.values[k].coeff(Mask{1} << i);
  }
  X.rowwise() -= X.colwise().mean();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(X);
  const Eigen::VectorXd s = svd.singularValues();
  SpanRank out;
  out.singular_values.assign(s.data(), s.data() + s.size());
  const double top = s.size() > 0 ? s(0) : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_threshold * top) ++out.rank;
  }
  if (out.rank == 0) {
    out.gap = 0.0;
  } else if (out.rank >= s.size()) {
    out.gap = std::numeric_limits<double>::infinity();
  } else {
    const double below = s(out.rank);
    out.gap = below > 0.0 ? s(out.rank - 1) / below : std::numeric_limits<double>::infinity();
  }
  return out;
}

std::vector<SequenceStep> minimal_sequence(const SurfaceGrid& f0, int steps,
                                           const DualityOptions& opts) {
  if (steps < 0) throw Error(ErrorCode::OutOfRange, "steps must be non-negative");
  int r = f0.r;
  for (int n = 0; n < steps; ++n) {
    r = next_dimension(r);
    if (r > kMaxSequenceDimension) {
      throw Error(ErrorCode::RCapExceeded, "step " + std::to_string(n + 1) + " would need r = " +
                                               std::to_string(r) + " > " +
                                               std::to_string(kMaxSequenceDimension));
    }
  }
  require_sphere_valued(f0, true, opts.sphere_tol);
  const double thr = opts.harmonic_threshold.value_or(50.0 * h2(f0.shape));

  std::vector<SequenceStep> out;
  SurfaceGrid f = f0;
  for (int n = 0; n <= steps; ++n) {
    SequenceStep step;
    step.level = n;
    step.r = f.r;
    const GaussMapResult gm = gauss_map_partial(differential(f));
    SurfaceGrid N = gm.N;
    N.inherit_structure(f);
    step.harmonicity = harmonicity_residual(f, opts.residual);
    if (step.harmonicity.max_norm > thr) {
      throw Error(ErrorCode::NotMinimal,
                  "level " + std::to_string(n) + " is not harmonic: " +
                      std::to_string(step.harmonicity.max_norm));
    }
    step.conformality = conformality_residual(f, N, opts.residual);
    step.span = span_rank(f);
    for (const Multivector& x : f.values) {
      step.sphere_defect = std::max(step.sphere_defect, std::abs(quad_form(x) - 1.0));
    }
    step.surface = f;
    out.push_back(std::move(step));
    if (n == steps) break;

    if (gm.degenerate_count * 100 > f.values.size()) {
      throw Error(ErrorCode::DegenerateStep,
                  "Gauss map degenerate at " + std::to_string(gm.degenerate_count) +
                      " nodes; the sequence terminates at level " + std::to_string(n));
    }
    const ResidualReport hN = harmonicity_residual(N, opts.residual);
    if (hN.max_norm > thr) {
      throw Error(ErrorCode::NotMinimal, "Gauss map at level " + std::to_string(n) +
                                             " is not harmonic: " + std::to_string(hN.max_norm));
    }
    f = bipolar_reindex(N);
  }
  return out;
}

std::int64_t spinor_degree(int genus, int r) {
  if (genus < 0) throw Error(ErrorCode::OutOfRange, "genus must be non-negative");
  if (r < 2 || r > 60) throw Error(ErrorCode::OutOfRange, "r must lie in [2, 60]");
  return (std::int64_t{1} << (r - 2)) * (static_cast<std::int64_t>(genus) - 1);
}

ResidualReport bipolar_energy_residual(const SurfaceGrid& f, const SurfaceGrid& N,
                                       const ResidualOptions& opts) {
  const OneFormField df = differential(f);
  const OneFormField dN = differential(N);
  const OneFormField dP = differential(f * N);
  ResidualAccumulator acc("bipolar_energy", f.shape, opts);
  double scale = 0.0;
  for (std::size_t k = 0; k < df.u.size(); ++k) {
    scale = std::max({scale, quad_form(df.u[k]), quad_form(df.v[k])});
  }
  for (int i = 0; i < f.shape.nu; ++i) {
    for (int j = 0; j < f.shape.nv; ++j) {
      const std::size_t k = f.shape.index(i, j);
      const double a = quad_form(dN.u[k]) - quad_form(df.u[k]) - quad_form(dP.u[k]);
      const double b = quad_form(dN.v[k]) - quad_form(df.v[k]) - quad_form(dP.v[k]);
      acc.add(i, j, std::max(std::abs(a), std::abs(b)));
    }
  }
  return acc.finish(positive_or_one(scale));
}

SequenceRelationResult sequence_darboux_relation(const SurfaceGrid& f, int n_max,
                                                 const DualityOptions& opts,
                                                 const PotentialOptions& potential) {
  if (n_max < 0) throw Error(ErrorCode::OutOfRange, "n_max must be non-negative");
  const SurfaceGrid N = gauss_map(f);
  const SurfaceGrid P = polar_dual(f, N, opts);
  const SurfaceGrid Pl = N * f;
  const OneFormField dP = differential(P);
  const int r = f.r;

  SequenceRelationResult res;
  res.ladder.push_back(f);
  std::vector<ResidualReport> closed;
  for (int n = 0; n <= n_max; ++n) {
    const SurfaceGrid& fn = res.ladder.back();
    const OneFormField w = -1.0 * (differential(fn) * P);
    Potential pot = integrate_potential(w, potential);
    closed.push_back(pot.closedness);
    SurfaceGrid g = std::move(pot.g);
    // Constants of integration: keep f_{n+1} away from zero divisors.
    const double m = max_node_norm(g);
    bool odd = true;
    for (const Multivector& x : g.values) {
      const Multivector even = grade_involution(x) + x;
      if (even.max_abs() > 1e-12 * std::max(1.0, m)) {
        odd = false;
        break;
      }
    }
    const Multivector c = odd ? Multivector::blade(r, 1, 1.0 + m) : Multivector::scalar(r, 1.0 + m);
    for (Multivector& x : g.values) x += c;
    g.inherit_structure(f);
    res.ladder.push_back(std::move(g));
  }

  std::vector<const ResidualReport*> all;
  res.levels.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const SurfaceGrid& fn = res.ladder[static_cast<std::size_t>(n)];
    const SurfaceGrid& fn1 = res.ladder[static_cast<std::size_t>(n) + 1];
    SequenceRelationLevel lvl;
    lvl.n = n;
    lvl.closedness = closed[static_cast<std::size_t>(n)];

    SurfaceGrid inv(r, fn1.shape);
    std::vector<unsigned char> bad(fn1.values.size(), 0);
    for (std::size_t k = 0; k < fn1.values.size(); ++k) {
      auto x = try_inverse(fn1.values[k]);
      if (x) {
        inv.values[k] = std::move(*x);
      } else {
        bad[k] = 1;
        ++lvl.masked;
      }
    }
    if (lvl.masked * 100 > fn1.values.size()) {
      throw Error(ErrorCode::NotInvertible, "f_" + std::to_string(n + 1) +
                                                " is not invertible at " +
                                                std::to_string(lvl.masked) + " nodes");
    }

    const SurfaceGrid lower = fn + Pl * fn1;  // (f_n)_#
    const SurfaceGrid upper = fn + fn1 * P;   // (f_n)^#
    const SurfaceGrid right = (P - lower * inv) + fn * inv;
    const SurfaceGrid left = (P - inv * upper) + inv * fn;
    const double scale = positive_or_one(max_node_norm(fn * inv));
    lvl.right = grid_report("sequence_right_n" + std::to_string(n), {&right}, scale,
                            opts.residual, &bad);
    lvl.left = grid_report("sequence_left_n" + std::to_string(n), {&left}, scale, opts.residual,
                           &bad);

    const OneFormField ql = differential(lower) - dP * fn1;
    const OneFormField qu = differential(upper) - fn1 * dP;
    lvl.quotient = form_report("sequence_quotient_n" + std::to_string(n), {&ql, &qu},
                               positive_or_one(max_node_norm(dP) * max_node_norm(fn1)),
                               opts.residual);

    const OneFormField dfn = differential(fn);
    const OneFormField lad = dfn * P - P * dfn;
    lvl.ladder = form_report("sequence_ladder_n" + std::to_string(n), {&lad},
                             positive_or_one(max_node_norm(dfn) * max_node_norm(P)),
                             opts.residual);
    res.levels.push_back(std::move(lvl));
  }
  for (const SequenceRelationLevel& l : res.levels) {
    all.push_back(&l.right);
    all.push_back(&l.left);
    all.push_back(&l.quotient);
    all.push_back(&l.ladder);
  }
  res.combined = worst_of("sequence_darboux_relation", all);
  return res;
}

}  // namespace cliffsurf
