// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "../oracle/blade_oracle.hpp"
#include "cliffsurf/calculus.hpp"
#include "cliffsurf/clifford.hpp"
#include "cliffsurf/connections.hpp"
#include "cliffsurf/duality.hpp"
#include "cliffsurf/properties.hpp"
#include "cliffsurf/study.hpp"
#include "cliffsurf/transforms.hpp"
#include "cliffsurf/zoo.hpp"

using namespace cliffsurf;

namespace {

// Pinned tolerances.
constexpr double kExactProduct = 0.0;
constexpr double kDenseProduct = 1e-12;
constexpr double kIdentity = 1e-12;
constexpr double kOrthogonal = 1e-9;
constexpr double kRatioLo = 3.2;
constexpr double kRatioHi = 4.8;
constexpr double kRoundoff = 1e-10;
constexpr double kSphereHopfFloor = 0.1;
constexpr double kSphereQH = 5e-2;
constexpr double kControlFactor = 10.0;
constexpr double kControlRatio = 0.44 / 1.25;
constexpr double kControlRatioTol = 0.2;
constexpr double kConstruction = 1e-12;
constexpr double kIsometry = 1e-10;
constexpr double kGrade1 = 1e-8;
constexpr double kSpanGap = 1e3;
constexpr double kOracleSeconds = 10.0;

const std::vector<int> kGrids = {32, 64, 128, 256};

int threads() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("CLIFFSURF_THREADS")) n = std::max(1, std::min(n, std::atoi(env)));
  return n;
}

struct Line {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<double> over_grids(const std::vector<int>& grids,
                               const std::function<double(int)>& fn) {
  std::vector<double> out(grids.size());
  parallel_for(grids.size(), threads(), [&](std::size_t k) { out[k] = fn(grids[k]); });
  return out;
}

// Second order in the pinned window, or at roundoff throughout.
void require_order(Line& line, const std::string& name, const std::vector<int>& grids,
                   const std::vector<double>& v) {
  const ConvergenceStudy s =
      classify_convergence("", name, grids, v, {kRatioLo, kRatioHi, kRoundoff});
  line.detail << ' ' << name << '=';
  if (s.exact) {
    line.detail << "exact(" << fmt(*std::max_element(v.begin(), v.end())) << ")";
  } else {
    for (std::size_t k = 0; k < s.ratios.size(); ++k)
      line.detail << (k ? "," : "") << fmt(s.ratios[k]);
  }
  line.require(s.pass, name + " values " + fmt(v.front()) + ".." + fmt(v.back()));
}

void report(int id, const std::string& title, Line& line) {
  std::printf("%s %2d %s:%s\n", line.pass ? "PASS" : "FAIL", id, title.c_str(),
              line.detail.str().c_str());
  std::fflush(stdout);
}

// ---- 1 ----------------------------------------------------------------------

Line criterion_algebra_oracle() {
  Line line;
  const auto t0 = std::chrono::steady_clock::now();
  long pairs = 0, bad = 0;
  for (int r = 3; r <= 5; ++r)
    for (Mask a = 0; a < (Mask{1} << r); ++a)
      for (Mask b = 0; b < (Mask{1} << r); ++b) {
        const auto [m, s] = oracle::blade_product(a, b);
        const Multivector p = Multivector::blade(r, a) * Multivector::blade(r, b);
        const bool ok = p.size() == 1 && p.terms()[0].mask == m &&
                        std::abs(p.terms()[0].coeff - s) <= kExactProduct;
        ++pairs;
        if (!ok) ++bad;
      }
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Multivector a = random_multivector(4, rng), b = random_multivector(4, rng);
    oracle::Dense da, db;
    for (const Term& x : a.terms()) da[x.mask] = x.coeff;
    for (const Term& x : b.terms()) db[x.mask] = x.coeff;
    const oracle::Dense want = oracle::product(da, db);
    const Multivector got = a * b;
    for (Mask m = 0; m < 16; ++m) {
      auto it = want.find(m);
      worst = std::max(worst, std::abs(got.coeff(m) - (it == want.end() ? 0.0 : it->second)));
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  line.detail << " pairs=" << pairs << " mismatches=" << bad << " dense_max=" << fmt(worst)
              << " time=" << fmt(secs) << "s";
  line.require(bad == 0, "blade pair mismatch");
  line.require(worst <= kDenseProduct, "dense product");
  line.require(secs < kOracleSeconds, "runtime");
  return line;
}

// ---- 2 ----------------------------------------------------------------------

double rel(const Multivector& a, const Multivector& b) {
  return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

Line criterion_structural() {
  Line line;
  const int r = 4;
  std::mt19937_64 rng(42);
  double anti = 0, rev = 0, inv = 0, nv = 0, omega = 0;
  for (int t = 0; t < 1000; ++t) {
    const Multivector u = random_unit_vector(r, rng);
    Multivector v = random_vector(r, rng);
    v -= u * inner(u, v);
    anti = std::max(anti, rel(u * v + v * u, Multivector(r)));
    const Multivector a = random_multivector(r, rng), b = random_multivector(r, rng);
    rev = std::max(rev, rel(reversion(a * b), reversion(b) * reversion(a)));
    inv = std::max({inv, rel(grade_involution(grade_involution(a)), a),
                    rel(grade_involution(a * b), grade_involution(a) * grade_involution(b))});
    const Multivector w = random_vector(r, rng);
    double q = 0.0;
    for (const Term& x : w.terms()) q += x.coeff * x.coeff;
    nv = std::max(nv, rel(norm_map(w), Multivector::scalar(r, q)));
  }
  for (int n = 2; n <= 4; ++n) {
    const Multivector w = volume_form(n, r);
    const double want = ((n * (n + 1) / 2) % 2) ? -1.0 : 1.0;
    omega = std::max(omega, rel(w * w, Multivector::scalar(r, want)));
  }
  line.detail << " anticommute=" << fmt(anti) << " reversion=" << fmt(rev)
              << " involution=" << fmt(inv) << " norm=" << fmt(nv) << " omega=" << fmt(omega);
  for (double x : {anti, rev, inv, nv, omega}) line.require(x <= kIdentity, "identity");
  return line;
}

// ---- 3 ----------------------------------------------------------------------

Eigen::MatrixXd action(const std::function<Multivector(const Multivector&)>& map, int r) {
  Eigen::MatrixXd M(r, r);
  for (int j = 0; j < r; ++j) {
    const Multivector img = map(Multivector::blade(r, Mask{1} << j));
    for (int i = 0; i < r; ++i) M(i, j) = img.coeff(Mask{1} << i);
  }
  return M;
}

Line criterion_reflection_rotor() {
  Line line;
  std::mt19937_64 rng(7);
  double qerr = 0.0, orth = 0.0, det_ref = 0.0, det_rot = 0.0;
  int wrong_fixed = 0;
  for (int t = 0; t < 500; ++t) {
    const int r = 3 + t % 4;
    const Multivector n = random_unit_vector(r, rng);
    const Multivector v = random_vector(r, rng);
    const Multivector w = twisted_adjoint(n, v);
    qerr = std::max(qerr, std::abs(quad_form(w) - quad_form(v)));
    const Eigen::MatrixXd R = action([&](const Multivector& x) { return twisted_adjoint(n, x); }, r);
    orth = std::max(orth, (R.transpose() * R - Eigen::MatrixXd::Identity(r, r)).norm());
    Eigen::FullPivLU<Eigen::MatrixXd> lu(R - Eigen::MatrixXd::Identity(r, r));
    lu.setThreshold(kOrthogonal);
    if (r - lu.rank() != r - 1) ++wrong_fixed;
    det_ref = std::max(det_ref, std::abs(R.determinant() + 1.0));

    const Multivector s = random_versor(r, 2 + 2 * (t % 3), rng);
    const Eigen::MatrixXd S = action([&](const Multivector& x) { return adjoint(s, x); }, r);
    orth = std::max(orth, (S.transpose() * S - Eigen::MatrixXd::Identity(r, r)).norm());
    det_rot = std::max(det_rot, std::abs(S.determinant() - 1.0));
  }
  line.detail << " Q=" << fmt(qerr) << " orth=" << fmt(orth) << " wrong_fixed=" << wrong_fixed
              << " det_reflect=" << fmt(det_ref) << " det_rotate=" << fmt(det_rot);
  for (double x : {qerr, orth, det_ref, det_rot}) line.require(x <= kOrthogonal, "orthogonality");
  line.require(wrong_fixed == 0, "fixed space");
  return line;
}

// ---- 4-7 --------------------------------------------------------------------

double at(const std::string& check, const std::string& surface, int n) {
  return run_check(check, surface, n);
}

Line criterion_conformality() {
  Line line;
  for (const char* s : {"catenoid", "clifford_torus"}) {
    require_order(line, std::string(s) + ".conformality", kGrids,
                  over_grids(kGrids, [&](int n) { return at("conformality", s, n); }));
  }
  return line;
}

Line criterion_minimality() {
  Line line;
  require_order(line, "catenoid.hopf", kGrids,
                over_grids(kGrids, [](int n) { return at("hopf", "catenoid", n); }));
  const auto sphere = over_grids(kGrids, [](int n) { return at("hopf", "round_sphere", n); });
  line.detail << " round_sphere.hopf=" << fmt(sphere.back()) << " (change "
              << fmt(std::abs(sphere.back() - sphere[sphere.size() - 2])) << ")";
  line.require(sphere.back() >= kSphereHopfFloor, "round sphere A_N floor");
  line.require(std::abs(sphere.back() - sphere[sphere.size() - 2]) < 0.1 * sphere.back(),
               "round sphere A_N not settled");
  return line;
}

// max | <H f>_2 | / max |H||f| over interior nodes.
double h_wedge_f(int n) {
  const SurfaceGrid f = generate(SurfaceKind::RoundSphere, n);
  const SurfaceGrid H = mean_curvature(f);
  const SurfaceGrid w = grade_project(H * f, 2);
  return grid_report("H^f", {&w}, max_node_norm(H) * max_node_norm(f)).max_norm;
}

Line criterion_mean_curvature() {
  Line line;
  for (const char* s : {"catenoid", "round_sphere"}) {
    require_order(line, std::string(s) + ".mcv", kGrids,
                  over_grids(kGrids, [&](int n) { return at("mcv", s, n); }));
  }
  const SurfaceGrid f = generate(SurfaceKind::RoundSphere, 128);
  const SurfaceGrid H = mean_curvature(f);
  ResidualAccumulator acc("QH", f.shape, {});
  for (int i = 0; i < 128; ++i)
    for (int j = 0; j < 128; ++j) acc.add(i, j, std::abs(quad_form(H.at(i, j)) - 1.0));
  const double qh = acc.finish(1.0).max_norm;
  line.detail << " |Q(H)-1|@128=" << fmt(qh);
  line.require(qh <= kSphereQH, "Q(H)");
  require_order(line, "round_sphere.H^f", kGrids, over_grids(kGrids, h_wedge_f));
  return line;
}

Line criterion_harmonicity() {
  Line line;
  std::vector<double> at128;
  for (const char* s : {"clifford_torus", "lawson"}) {
    const auto v = over_grids(kGrids, [&](int n) { return at("harmonicity", s, n); });
    require_order(line, std::string(s) + ".harmonicity", kGrids, v);
    at128.push_back(v[2]);
  }
  const double control = at("harmonicity", "perturbed_torus", 128);
  const double ref = std::max(at128[0], at128[1]);
  line.detail << " perturbed@128=" << fmt(control) << " vs " << fmt(ref);
  line.require(control >= kControlFactor * ref, "non-harmonic control");
  return line;
}

// ---- 8 ----------------------------------------------------------------------

Line criterion_flat_connections() {
  Line line;
  const std::vector<int> grids = {32, 64, 128};
  struct Case {
    const char* name;
    PhiVariant variant;
  };
  for (const Case c : {Case{"catenoid_gauss", PhiVariant::PhiTilde},
                       Case{"clifford_torus", PhiVariant::Phi}}) {
    std::vector<SweepRequest> reqs = unit_circle_samples(8, c.variant);
    const auto sig = sigma_samples(8, c.variant);
    reqs.insert(reqs.end(), sig.begin(), sig.end());
    std::vector<SurfaceGrid> fs(grids.size());
    parallel_for(grids.size(), threads(),
                 [&](std::size_t k) { fs[k] = named_surface(c.name, grids[k]); });
    std::vector<std::vector<double>> v(reqs.size(), std::vector<double>(grids.size()));
    parallel_for(reqs.size() * grids.size(), threads(), [&](std::size_t idx) {
      const std::size_t q = idx / grids.size(), g = idx % grids.size();
      v[q][g] = evaluate_sample(fs[g], reqs[q]).curvature.max_norm;
    });
    int ok = 0;
    double finest = 0.0;
    for (std::size_t q = 0; q < reqs.size(); ++q) {
      const ConvergenceStudy s =
          classify_convergence(c.name, "curvature", grids, v[q], {kRatioLo, kRatioHi, kRoundoff});
      ok += s.pass;
      finest = std::max(finest, v[q].back());
    }
    const double a = lambda_connection_curvature(fs.back(), 1.2, 0.0, c.variant).curvature.max_norm;
    const double b = lambda_connection_curvature(fs.back(), 1.5, 0.0, c.variant).curvature.max_norm;
    line.detail << ' ' << c.name << ": " << ok << "/" << reqs.size() << " decay, finest=" << fmt(finest)
                << " control=" << fmt(a) << " ratio=" << fmt(a / b);
    line.require(ok == static_cast<int>(reqs.size()), std::string(c.name) + " decay");
    line.require(a >= kControlFactor * finest, std::string(c.name) + " control");
    line.require(std::abs(a / b - kControlRatio) <= kControlRatioTol * kControlRatio,
                 std::string(c.name) + " control ratio");
  }
  return line;
}

// ---- 9 ----------------------------------------------------------------------

Line criterion_darboux() {
  Line line;
  const std::vector<int> grids = {32, 64, 128};
  {
    const ConjugateResult c = conjugate_surface(generate(SurfaceKind::Catenoid, 128));
    const bool has_period = c.period_u.has_value();
    const double period = has_period ? c.period_u->norm() : 0.0;
    line.detail << " conj.construction=" << fmt(c.construction.max_norm)
                << " period_u=" << fmt(period);
    line.require(c.construction.max_norm <= kConstruction, "dh + *df");
    line.require(has_period && std::abs(period - 2.0 * std::numbers::pi) < 1e-6, "period report");
  }
  struct Out {
    double defining, connection;
  };
  std::vector<Out> out(grids.size());
  parallel_for(grids.size(), threads(), [&](std::size_t k) {
    const SurfaceGrid f = generate(SurfaceKind::Catenoid, grids[k]);
    const SurfaceGrid N = gauss_map(f);
    const DarbouxResult d = darboux(f, N, lambda_recipe("N", f, N), Side::Right);
    out[k] = {d.defining.max_norm,
              darboux_connection_residual(d.f_sharp, d.T, Side::Right).max_norm};
  });
  std::vector<double> def, con;
  for (const Out& o : out) {
    def.push_back(o.defining);
    con.push_back(o.connection);
  }
  require_order(line, "f+hN.defining", grids, def);
  require_order(line, "nabla#.curvature", grids, con);

  struct Perm {
    const char* surface;
    const char* l0;
    const char* l1;
  };
  for (const Perm p : {Perm{"clifford_torus", "fN", "fN+c"}, Perm{"catenoid", "N", "N+c"}}) {
    const auto v = over_grids(grids, [&](int n) {
      const SurfaceGrid f = named_surface(p.surface, n);
      const SurfaceGrid N = gauss_map(f);
      return permutability_check(f, N, lambda_recipe(p.l0, f, N), lambda_recipe(p.l1, f, N),
                                 Side::Right)
          .relation.max_norm;
    });
    require_order(line, std::string(p.surface) + ".permutability", grids, v);
  }
  return line;
}

// ---- 10 ---------------------------------------------------------------------

Line criterion_spin() {
  Line line;
  {
    const SurfaceGrid f = generate(SurfaceKind::Catenoid, 64);
    const SpinTransformResult s = spin_transform(f, lambda_recipe("pin", f, gauss_map(f)));
    const MetricField a = induced_metric(f), b = induced_metric(s.df_new);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.E.size(); ++k)
      worst = std::max({worst, std::abs(a.E[k] - b.E[k]), std::abs(a.F[k] - b.F[k]),
                        std::abs(a.G[k] - b.G[k])});
    line.detail << " pin.metric=" << fmt(worst);
    line.require(worst <= kIsometry, "constant Pin isometry");
  }
  const std::vector<int> grids = {32, 64, 128};
  std::vector<double> conf(grids.size()), purity(grids.size());
  parallel_for(grids.size(), threads(), [&](std::size_t k) {
    const SurfaceGrid f = generate(SurfaceKind::Catenoid, grids[k]);
    const SurfaceGrid N = gauss_map(f);
    const DarbouxResult d = darboux(f, N, lambda_recipe("N", f, N), Side::Right);
    const SpinTransformResult s = spin_transform(f, N, d.f_sharp);
    conf[k] = s.conformality.max_norm;
    purity[k] = s.grade1_defect;
  });
  require_order(line, "f#.spin.conformality", grids, conf);
  const double p = *std::max_element(purity.begin(), purity.end());
  line.detail << " grade1=" << fmt(p);
  line.require(p <= kGrade1, "grade-1 purity");
  return line;
}

// ---- 11 ---------------------------------------------------------------------

Line criterion_duality() {
  Line line;
  require_order(line, "lawson.polar", kGrids,
                over_grids(kGrids, [](int n) { return at("polar", "lawson", n); }));
  const std::vector<int> grids = {64, 128, 256};
  std::vector<SequenceStep> last(grids.size());
  parallel_for(grids.size(), threads(), [&](std::size_t k) {
    last[k] = minimal_sequence(generate(SurfaceKind::Lawson, grids[k]), 1).back();
  });
  std::vector<double> harm;
  double sphere = 0.0;
  for (const SequenceStep& s : last) {
    harm.push_back(s.harmonicity.max_norm);
    sphere = std::max(sphere, s.sphere_defect);
  }
  require_order(line, "bipolar.harmonicity", grids, harm);
  const SequenceStep& fine = last.back();
  line.detail << " r=" << fine.r << " span_rank=" << fine.span.rank << " gap=" << fmt(fine.span.gap)
              << " sphere=" << fmt(sphere);
  line.require(fine.r == 6, "r = 6");
  line.require(sphere <= kRoundoff, "sphere-valued");
  for (const SequenceStep& s : last) {
    line.require(s.span.rank == 5, "span rank");
    line.require(s.span.gap >= kSpanGap, "singular-value gap");
  }
  int wrong = 0;
  for (int g = 0; g <= 3; ++g)
    for (int r = 3; r <= 5; ++r) {
      const auto want = static_cast<std::int64_t>(std::ldexp(static_cast<double>(g - 1), r - 2));
      if (spinor_degree(g, r) != want) ++wrong;
    }
  line.detail << " degree_mismatches=" << wrong;
  line.require(wrong == 0, "spinor degree");
  return line;
}

// ---- 12 ---------------------------------------------------------------------

Line criterion_sequence() {
  Line line;
  const std::vector<int> grids = {32, 64, 128};
  for (const char* s : {"clifford_torus", "lawson"}) {
    const auto v = over_grids(grids, [&](int n) {
      return sequence_darboux_relation(named_surface(s, n), 1).combined.max_norm;
    });
    require_order(line, std::string(s) + ".relation", grids, v);
  }
  return line;
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    Line (*run)();
  };
  const Criterion all[] = {
      {"algebra oracle equivalence", criterion_algebra_oracle},
      {"structural identities", criterion_structural},
      {"reflections and rotors", criterion_reflection_rotor},
      {"conformality convergence", criterion_conformality},
      {"minimality", criterion_minimality},
      {"mean-curvature identity", criterion_mean_curvature},
      {"harmonicity", criterion_harmonicity},
      {"flat connections", criterion_flat_connections},
      {"Darboux pipeline", criterion_darboux},
      {"spin transform", criterion_spin},
      {"duality", criterion_duality},
      {"sequence Darboux relation", criterion_sequence},
  };
  int failures = 0;
  int id = 1;
  for (const Criterion& c : all) {
    Line line;
    try {
      line = c.run();
    } catch (const std::exception& e) {
      line.pass = false;
      line.detail << " [exception: " << e.what() << "]";
    }
    report(id++, c.title, line);
    failures += !line.pass;
  }
  std::printf("%d/%d criteria passed\n", 12 - failures, 12);
  return failures == 0 ? 0 : 1;
}
