#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cliffsurf/calculus.hpp"

namespace cliffsurf {

// Ambient dimension cap for the bipolar ladder.
inline constexpr int kMaxSequenceDimension = 16;

struct DualityOptions {
  ResidualOptions residual;
  // Defaults to max(1e-9, 50 h^2).
  std::optional<double> commutator_tol;
  // Threshold for harmonicity checks; defaults to 50 h^2.
  std::optional<double> harmonic_threshold;
  double sphere_tol = 1e-8;
};

// fN for sphere-valued f. Throws NotSphereValued or CommutatorNonzero.
SurfaceGrid polar_dual(const SurfaceGrid& f, const SurfaceGrid& N, const DualityOptions& opts = {});

// *dP = -N dP = dP N for P = fN; relative to max|dP|.
ResidualReport polar_dual_residual(const SurfaceGrid& P, const SurfaceGrid& N,
                                   const SurfaceGrid& domain, const ResidualOptions& opts = {});

// Lexicographic index of e_i e_j (0-based i < j) among r(r-1)/2 pairs.
int pair_index(int i, int j, int r);

// Grade-2 field in Cl(V_r) to a vector field in Cl(V_{r(r-1)/2}).
SurfaceGrid bipolar_reindex(const SurfaceGrid& N, double tol = 1e-8);
Multivector bipolar_reindex(const Multivector& b, double tol = 1e-8);

struct SpanRank {
  int rank = 0;
  // sigma_{rank-1} / sigma_rank; infinite when every direction is retained.
  double gap = 0.0;
  std::vector<double> singular_values;
};

// Affine rank of the vector parts of the node values (centered SVD, 1e-6 relative).
SpanRank span_rank(const SurfaceGrid& f, double rel_threshold = 1e-6);

struct SequenceStep {
  int level = 0;
  int r = 0;
  SurfaceGrid surface;
  ResidualReport conformality;
  ResidualReport harmonicity;
  SpanRank span;
  double sphere_defect = 0.0;
};

// f_0, f_1 = bipolar(N_0), ... up to `steps` (<= 2). Throws RCapExceeded before any
// work when the ladder would pass r = 16, NotMinimal, or DegenerateStep.
std::vector<SequenceStep> minimal_sequence(const SurfaceGrid& f0, int steps,
                                           const DualityOptions& opts = {});

// 2^(r-2) (g - 1).
std::int64_t spinor_degree(int genus, int r);

// Q~(dN) - Q(df) - Q~(d(fN)) per direction, relative to max Q(df).
ResidualReport bipolar_energy_residual(const SurfaceGrid& f, const SurfaceGrid& N,
                                       const ResidualOptions& opts = {});

struct SequenceRelationLevel {
  int n = 0;
  // ((fN)^#)_n + f_n f_{n+1}^-1 and ((fN)_#)_n + f_{n+1}^-1 f_n.
  ResidualReport right;
  ResidualReport left;
  // d(f_n)_# = d(fN) f_{n+1} and d(f_n)^# = f_{n+1} d(fN).
  ResidualReport quotient;
  // -df_n fN against -fN df_n.
  ResidualReport ladder;
  ResidualReport closedness;
  std::size_t masked = 0;
};

struct SequenceRelationResult {
  std::vector<SequenceRelationLevel> levels;
  // Largest of all level reports.
  ResidualReport combined;
  std::vector<SurfaceGrid> ladder;
};

SequenceRelationResult sequence_darboux_relation(const SurfaceGrid& f, int n_max = 2,
                                                 const DualityOptions& opts = {},
                                                 const PotentialOptions& potential = {});

}  // namespace cliffsurf
