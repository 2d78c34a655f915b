#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "cliffsurf/calculus.hpp"
#include "cliffsurf/clifford.hpp"
#include "cliffsurf/connections.hpp"
#include "cliffsurf/duality.hpp"
#include "cliffsurf/io.hpp"
#include "cliffsurf/properties.hpp"
#include "cliffsurf/study.hpp"
#include "cliffsurf/transforms.hpp"
#include "cliffsurf/zoo.hpp"

#ifndef CLIFFSURF_VERSION
#define CLIFFSURF_VERSION "0.0.0"
#endif

using namespace cliffsurf;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

// Usage or IO problem detected by the front end.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int thread_cap() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("CLIFFSURF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw UsageError("CLIFFSURF_THREADS must be a positive integer");
    }
    n = std::min<long>(n, v);
  }
  return n;
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return hex64(fnv1a(ss.str()));
}

void require_readable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
}

void require_writable(const std::string& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw UsageError("cannot write " + path);
}

double default_threshold(const GridShape& s) { return 50.0 * s.h() * s.h(); }

struct Context {
  std::string command;
  json config = json::object();
  json tolerances = json::object();
  std::uint64_t seed = 0;
  std::string report_path;
  int threads = 1;
};

json envelope(const Context& ctx, json result, bool pass) {
  return {{"tool", "cliffsurf"},
          {"version", CLIFFSURF_VERSION},
          {"command", ctx.command},
          {"config", ctx.config},
          {"config_hash", hex64(fnv1a(ctx.config.dump()))},
          {"seed", ctx.seed},
          {"tolerances", ctx.tolerances},
          {"pass", pass},
          {"result", std::move(result)}};
}

void emit(const Context& ctx, const json& report) {
  if (ctx.report_path.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    write_json(ctx.report_path, report);
  }
}

json error_json(const Error& e) { return {{"code", to_string(e.code())}, {"message", e.what()}}; }

json period_json(const std::optional<Multivector>& p) {
  return p ? to_json(*p) : json(nullptr);
}

SurfaceGrid load(Context& ctx, const std::string& path) {
  require_readable(path);
  ctx.config["input"] = path;
  ctx.config["input_hash"] = file_hash(path);
  return read_surface(path);
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string surface;
  int nu = 64;
  int nv = 64;
  std::optional<double> m, k, a, eps;
  std::string output;
};

int cmd_generate(Context& ctx, const GenerateArgs& args) {
  ctx.config.update({{"surface", args.surface}, {"nu", args.nu}, {"nv", args.nv}});
  require_writable(args.output);
  SurfaceGrid g;
  if (auto kind = surface_kind_from_string(args.surface)) {
    SurfaceSpec spec;
    spec.kind = *kind;
    spec.nu = args.nu;
    spec.nv = args.nv;
    if (args.m) spec.params["m"] = *args.m;
    if (args.k) spec.params["k"] = *args.k;
    if (args.a) spec.params["a"] = *args.a;
    for (const auto& [key, val] : spec.params) ctx.config[key] = val;
    g = generate(spec);
  } else if (args.surface == "catenoid_gauss") {
    SurfaceSpec spec;
    spec.kind = SurfaceKind::Catenoid;
    spec.nu = args.nu;
    spec.nv = args.nv;
    g = gauss_map(generate(spec));
  } else if (args.surface == "perturbed_torus") {
    ctx.config["eps"] = args.eps.value_or(0.2);
    g = perturbed_torus(args.nu, args.nv, args.eps.value_or(0.2));
  } else if (args.surface == "sheared_plane") {
    g = sheared_plane(args.nu, args.nv);
  } else if (args.surface == "curve_sweep") {
    g = curve_sweep(args.nu, args.nv);
  } else {
    throw UsageError("unknown surface: " + args.surface);
  }
  write_surface(args.output, g);
  ctx.config["output"] = args.output;
  emit(ctx, envelope(ctx, {{"surface", args.surface}, {"r", g.r}, {"output", args.output}}, true));
  return kExitPass;
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  std::string input;
  std::optional<double> threshold;
  std::string csv;
};

int cmd_analyze(Context& ctx, const AnalyzeArgs& args) {
  SurfaceGrid f = load(ctx, args.input);
  const double thr = args.threshold.value_or(default_threshold(f.shape));
  ctx.tolerances["threshold"] = thr;
  ResidualOptions ropts;
  ropts.keep_node_values = !args.csv.empty();
  if (!args.csv.empty()) require_writable(args.csv);

  const SurfaceGrid N = gauss_map(f);
  const ResidualReport conf = conformality_residual(f, N, ropts);
  const ResidualReport hopf = hopf_report(f, N);
  const ResidualReport mcv = mcv_identity_residual(f, N);
  json result = {{"r", f.r},
                 {"conformality", to_json(conf)},
                 {"hopf", to_json(hopf)},
                 {"mcv_identity", to_json(mcv)},
                 {"minimal", hopf.max_norm <= thr}};
  try {
    const ResidualReport harm = harmonicity_residual(f);
    result["harmonicity"] = to_json(harm);
    result["harmonic"] = harm.max_norm <= thr;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotSphereValued) throw;
    result["harmonicity"] = nullptr;
    result["harmonic"] = nullptr;
    result["harmonicity_skipped"] = "not sphere-valued";
  }
  if (!args.csv.empty()) {
    std::ofstream out(args.csv);
    write_residual_csv(out, conf, f.shape);
  }
  const bool pass = conf.max_norm <= thr && mcv.max_norm <= thr;
  emit(ctx, envelope(ctx, std::move(result), pass));
  return pass ? kExitPass : kExitFail;
}

// ---- transform --------------------------------------------------------------

struct TransformArgs {
  std::string kind;
  std::string input;
  std::string lambda_file;
  std::string recipe;
  double c = 0.25;
  std::optional<double> threshold;
  std::string output;
};

json darboux_json(const DarbouxResult& d) {
  json j = {{"side", to_string(d.side)},
            {"wedge", to_json(d.wedge)},
            {"closedness", to_json(d.closedness)},
            {"defining", to_json(d.defining)}};
  if (d.defining_left) j["defining_left"] = to_json(*d.defining_left);
  return j;
}

int cmd_transform(Context& ctx, const TransformArgs& args) {
  SurfaceGrid f = load(ctx, args.input);
  require_writable(args.output);
  ctx.config.update({{"kind", args.kind}, {"output", args.output}, {"c", args.c}});
  const double thr = args.threshold.value_or(default_threshold(f.shape));
  ctx.tolerances["threshold"] = thr;
  const SurfaceGrid N = gauss_map(f);

  auto lambda = [&](const std::string& fallback) {
    if (!args.lambda_file.empty()) {
      ctx.config["lambda"] = args.lambda_file;
      ctx.config["lambda_hash"] = file_hash(args.lambda_file);
      SurfaceGrid l = read_surface(args.lambda_file);
      l.inherit_structure(f);
      return l;
    }
    const std::string name = args.recipe.empty() ? fallback : args.recipe;
    ctx.config["recipe"] = name;
    return lambda_recipe(name, f, N, args.c);
  };

  json result;
  bool pass = false;
  SurfaceGrid out;
  if (args.kind == "spin") {
    SpinTransformResult s = spin_transform(f, N, lambda("pin"));
    result = {{"holomorphicity", to_json(s.holomorphicity)},
              {"closedness", to_json(s.closedness)},
              {"conformality", to_json(s.conformality)},
              {"grade1_defect", s.grade1_defect},
              {"period_u", period_json(s.period_u)},
              {"period_v", period_json(s.period_v)}};
    pass = s.conformality.max_norm <= thr;
    out = std::move(s.f_new);
  } else if (args.kind == "conjugate") {
    ConjugateResult c = conjugate_surface(f);
    result = {{"hopf", to_json(c.hopf)},
              {"closedness", to_json(c.closedness)},
              {"construction", to_json(c.construction)},
              {"recovered", to_json(c.recovered)},
              {"period_u", period_json(c.period_u)},
              {"period_v", period_json(c.period_v)}};
    pass = c.closedness.max_norm <= thr;
    out = std::move(c.h);
  } else if (args.kind == "darboux-left" || args.kind == "darboux-right") {
    const Side side = args.kind == "darboux-left" ? Side::Left : Side::Right;
    DarbouxResult d = darboux(f, N, lambda(f.r >= 4 ? "fN" : "N"), side);
    result = darboux_json(d);
    pass = d.defining.max_norm <= thr;
    out = std::move(d.f_sharp);
  } else if (args.kind == "darboux-two-sided") {
    SurfaceGrid T;
    if (!args.lambda_file.empty()) {
      T = lambda("");
    } else {
      ctx.config["recipe"] = "hN";
      T = conjugate_darboux_T(conjugate_surface(f).h, N);
    }
    DarbouxResult d = darboux_two_sided(f, N, T);
    result = darboux_json(d);
    pass = d.defining.max_norm <= thr && d.defining_left->max_norm <= thr;
    out = std::move(d.f_sharp);
  } else {
    throw UsageError("unknown transform kind: " + args.kind);
  }
  write_surface(args.output, out);
  result["output"] = args.output;
  emit(ctx, envelope(ctx, std::move(result), pass));
  return pass ? kExitPass : kExitFail;
}

// ---- connections ------------------------------------------------------------

struct ConnectionArgs {
  std::string input;
  std::string sweep;
  int samples = 8;
  std::string variant = "phitilde";
  std::optional<double> threshold;
  std::string csv;
};

int cmd_connections(Context& ctx, const ConnectionArgs& args) {
  SurfaceGrid f = load(ctx, args.input);
  ctx.config.update({{"sweep", args.sweep}, {"samples", args.samples}, {"variant", args.variant}});
  if (args.samples < 1) throw UsageError("--samples must be positive");
  PhiVariant var;
  if (args.variant == "phi") {
    var = PhiVariant::Phi;
  } else if (args.variant == "phitilde") {
    var = PhiVariant::PhiTilde;
  } else {
    throw UsageError("--variant must be phi or phitilde");
  }
  const double thr = args.threshold.value_or(default_threshold(f.shape));
  ctx.tolerances["threshold"] = thr;

  std::vector<SweepRequest> reqs;
  if (args.sweep == "circle") {
    reqs = unit_circle_samples(args.samples, var);
  } else if (args.sweep == "sigma") {
    reqs = sigma_samples(args.samples, var);
  } else if (args.sweep == "theta") {
    if (args.samples < 4) throw UsageError("theta sweep needs --samples >= 4");
    for (int k = 0; k < args.samples; ++k) {
      reqs.push_back({SampleKind::Theta, var, 2.0 * std::numbers::pi * k / args.samples, 0.0});
    }
  } else {
    throw UsageError("--sweep must be circle, sigma or theta");
  }
  if (!args.csv.empty()) require_writable(args.csv);

  std::vector<ConnectionSample> out(reqs.size());
  parallel_for(reqs.size(), ctx.threads,
               [&](std::size_t k) { out[k] = evaluate_sample(f, reqs[k]); });

  json list = json::array();
  bool pass = true;
  for (const ConnectionSample& s : out) {
    const bool ok = s.curvature.max_norm <= thr;
    pass = pass && ok;
    list.push_back({{"param",
                     {{"kind", to_string(s.kind)}, {"variant", to_string(s.variant)},
                      {"p0", s.p0}, {"p1", s.p1}}},
                    {"max", s.curvature.max_norm},
                    {"mean", s.curvature.mean_norm},
                    {"grids", json::array({f.shape.nu})},
                    {"pass", ok}});
  }
  if (!args.csv.empty()) {
    std::ofstream csv(args.csv);
    csv << "kind,p0,p1,modulus,max,mean\n";
    for (const ConnectionSample& s : out) {
      csv << to_string(s.kind) << ',' << s.p0 << ',' << s.p1 << ','
          << std::hypot(s.p0, s.p1) << ',' << s.curvature.max_norm << ','
          << s.curvature.mean_norm << '\n';
    }
  }
  emit(ctx, envelope(ctx, {{"samples", std::move(list)}}, pass));
  return pass ? kExitPass : kExitFail;
}

// ---- duality ----------------------------------------------------------------

struct DualityArgs {
  std::string input;
  std::string op;
  int steps = 1;
  std::optional<int> genus;
  std::optional<int> r;
  std::string output;
  bool no_embed = false;
  std::optional<double> threshold;
};

json span_json(const SpanRank& s) {
  return {{"rank", s.rank},
          {"gap", std::isfinite(s.gap) ? json(s.gap) : json("inf")},
          {"singular_values", s.singular_values}};
}

json pair_order(int r) {
  json pairs = json::array();
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) pairs.push_back({i + 1, j + 1});
  return pairs;
}

std::string level_path(const std::string& out, int level) {
  const auto dot = out.rfind('.');
  const std::string stem = dot == std::string::npos ? out : out.substr(0, dot);
  return stem + "_level" + std::to_string(level) + ".json";
}

int cmd_duality(Context& ctx, const DualityArgs& args) {
  ctx.config["op"] = args.op;
  if (args.op == "degree") {
    if (!args.genus || !args.r) throw UsageError("degree needs --genus and --r");
    ctx.config.update({{"genus", *args.genus}, {"r", *args.r}});
    std::int64_t d = 0;
    try {
      d = spinor_degree(*args.genus, *args.r);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    std::cout << d << '\n';
    if (!ctx.report_path.empty()) emit(ctx, envelope(ctx, {{"degree", d}}, true));
    return kExitPass;
  }
  SurfaceGrid f = load(ctx, args.input);
  if (!args.output.empty()) {
    require_writable(args.output);
    ctx.config["output"] = args.output;
  }
  const double thr = args.threshold.value_or(default_threshold(f.shape));
  ctx.tolerances["threshold"] = thr;
  json result;
  bool pass = false;

  if (args.op == "polar") {
    const SurfaceGrid N = gauss_map(f);
    const SurfaceGrid P = polar_dual(f, N);
    const ResidualReport rep = polar_dual_residual(P, N, f);
    double defect = 0.0;
    for (const Multivector& x : P.values) {
      defect = std::max({defect, x.norm_outside_grade(3), std::abs(quad_form(x) - 1.0)});
    }
    result = {{"residual", to_json(rep)}, {"grade3_unit_defect", defect}};
    pass = rep.max_norm <= thr;
    if (!args.output.empty()) write_surface(args.output, P);
  } else if (args.op == "bipolar") {
    const SurfaceGrid N = gauss_map(f);
    const SurfaceGrid g = bipolar_reindex(N);
    const ResidualReport harm = harmonicity_residual(g);
    result = {{"r", g.r},
              {"pair_order", pair_order(f.r)},
              {"span", span_json(span_rank(g))},
              {"harmonicity", to_json(harm)}};
    pass = harm.max_norm <= thr;
    if (!args.output.empty()) write_surface(args.output, g);
  } else if (args.op == "sequence") {
    ctx.config.update({{"steps", args.steps}, {"embed", !args.no_embed}});
    if (args.steps < 0 || args.steps > 2) throw UsageError("--steps must be 0, 1 or 2");
    const auto steps = minimal_sequence(f, args.steps);
    json list = json::array();
    for (const SequenceStep& s : steps) {
      json j = {{"level", s.level},
                {"r", s.r},
                {"conformality", to_json(s.conformality)},
                {"harmonicity", to_json(s.harmonicity)},
                {"span", span_json(s.span)},
                {"sphere_defect", s.sphere_defect}};
      if (!args.no_embed) {
        j["surface"] = to_json(s.surface);
      } else if (!args.output.empty()) {
        const std::string p = level_path(args.output, s.level);
        write_surface(p, s.surface);
        j["surface_file"] = p;
      }
      list.push_back(std::move(j));
    }
    result = {{"steps", std::move(list)}, {"pair_order", "lexicographic"}};
    pass = true;
    if (!args.output.empty()) write_json(args.output, result);
  } else if (args.op == "relation") {
    ctx.config["steps"] = args.steps;
    const auto rel = sequence_darboux_relation(f, args.steps);
    json levels = json::array();
    for (const auto& l : rel.levels) {
      levels.push_back({{"n", l.n},
                        {"right", to_json(l.right)},
                        {"left", to_json(l.left)},
                        {"quotient", to_json(l.quotient)},
                        {"ladder", to_json(l.ladder)},
                        {"closedness", to_json(l.closedness)},
                        {"masked", l.masked}});
    }
    result = {{"levels", std::move(levels)}, {"combined", to_json(rel.combined)}};
    pass = rel.combined.max_norm <= thr;
  } else {
    throw UsageError("--op must be polar, bipolar, sequence, relation or degree");
  }
  emit(ctx, envelope(ctx, std::move(result), pass));
  return pass ? kExitPass : kExitFail;
}

// ---- algebra-check ----------------------------------------------------------

struct AlgebraArgs {
  int r = 4;
  int trials = 1000;
};

int cmd_algebra(Context& ctx, const AlgebraArgs& args) {
  ctx.config.update({{"r", args.r}, {"trials", args.trials}});
  if (args.r < 3 || args.r > 10) throw UsageError("--r must lie in [3, 10]");
  if (args.trials < 1) throw UsageError("--trials must be positive");
  const auto results = algebra_property_suite(args.r, args.trials, ctx.seed);
  json list = json::array();
  bool pass = true;
  for (const PropertyResult& p : results) {
    pass = pass && p.pass;
    ctx.tolerances[p.name] = p.tol;
    list.push_back({{"family", p.name}, {"trials", p.trials}, {"worst", p.worst},
                    {"tol", p.tol}, {"pass", p.pass}});
  }
  emit(ctx, envelope(ctx, {{"families", std::move(list)}}, pass));
  return pass ? kExitPass : kExitFail;
}

// ---- study ------------------------------------------------------------------

struct StudyArgs {
  std::string surface;
  std::vector<int> grids{32, 64, 128, 256};
  std::string check;
};

int cmd_study(Context& ctx, const StudyArgs& args) {
  ctx.config.update({{"surface", args.surface}, {"grids", args.grids}, {"check", args.check}});
  const ConvergenceWindow window;
  ctx.tolerances = {{"ratio_lo", window.lo}, {"ratio_hi", window.hi},
                    {"exact_floor", window.exact_floor}};
  const ConvergenceStudy s = study(args.surface, args.grids, args.check, ctx.threads, window);
  json rows = json::array();
  std::cerr << "grid      residual        ratio\n";
  for (std::size_t k = 0; k < s.grids.size(); ++k) {
    json row = {{"grid", s.grids[k]}, {"residual", s.values[k]}};
    char line[96];
    if (k > 0) {
      row["ratio"] = s.ratios[k - 1];
      std::snprintf(line, sizeof line, "%-8d  %.6e  %.4f\n", s.grids[k], s.values[k],
                    s.ratios[k - 1]);
    } else {
      std::snprintf(line, sizeof line, "%-8d  %.6e  -\n", s.grids[k], s.values[k]);
    }
    std::cerr << line;
    rows.push_back(std::move(row));
  }
  std::cerr << "verdict: " << s.verdict << '\n';
  emit(ctx, envelope(ctx, {{"table", std::move(rows)}, {"verdict", s.verdict}}, s.pass));
  return s.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cliffsurf: Clifford-algebra surface toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx;
  app.add_option("--report", ctx.report_path, "Write the JSON report here instead of stdout");
  app.add_option("--seed", ctx.seed, "Seed recorded in the report (and used by algebra-check)");

  GenerateArgs gen;
  auto* sg = app.add_subcommand("generate", "Sample a surface onto a grid");
  sg->add_option("--surface", gen.surface)->required();
  sg->add_option("--nu", gen.nu);
  sg->add_option("--nv", gen.nv);
  sg->add_option("--m", gen.m);
  sg->add_option("--k", gen.k);
  sg->add_option("--a", gen.a, "Graph amplitude");
  sg->add_option("--eps", gen.eps, "Perturbation size for perturbed_torus");
  sg->add_option("-o,--output", gen.output)->required();

  AnalyzeArgs an;
  auto* sa = app.add_subcommand("analyze", "Conformality, Hopf, harmonicity and mcv residuals");
  sa->add_option("--input", an.input)->required();
  sa->add_option("--threshold", an.threshold);
  sa->add_option("--csv", an.csv, "Per-node conformality residuals");

  TransformArgs tr;
  auto* st = app.add_subcommand("transform", "Spin, conjugate and Darboux transforms");
  st->add_option("--kind", tr.kind)
      ->required()
      ->check(CLI::IsMember(
          {"spin", "conjugate", "darboux-left", "darboux-right", "darboux-two-sided"}));
  st->add_option("--input", tr.input)->required();
  auto* lam = st->add_option("--lambda", tr.lambda_file, "Surface file holding lambda (or T)");
  st->add_option("--recipe", tr.recipe, "one, pin, N, fN, fN+c, N+c")->excludes(lam);
  st->add_option("--c", tr.c);
  st->add_option("--threshold", tr.threshold);
  st->add_option("-o,--output", tr.output)->required();

  ConnectionArgs co;
  auto* sc = app.add_subcommand("connections", "Flatness sweeps of the connection families");
  sc->add_option("--input", co.input)->required();
  sc->add_option("--sweep", co.sweep)->required();
  sc->add_option("--samples", co.samples);
  sc->add_option("--variant", co.variant);
  sc->add_option("--threshold", co.threshold);
  sc->add_option("--csv", co.csv);

  DualityArgs du;
  auto* sd = app.add_subcommand("duality", "Polar/bipolar duals, sequence and degree");
  sd->add_option("--input", du.input);
  sd->add_option("--op", du.op)->required();
  sd->add_option("--steps", du.steps);
  sd->add_option("--genus", du.genus);
  sd->add_option("--r", du.r);
  sd->add_option("-o,--output", du.output);
  sd->add_flag("--no-embed", du.no_embed);
  sd->add_option("--threshold", du.threshold);

  AlgebraArgs al;
  auto* sl = app.add_subcommand("algebra-check", "Seeded algebra identity families");
  sl->add_option("--r", al.r);
  sl->add_option("--trials", al.trials);

  StudyArgs sy;
  auto* ss = app.add_subcommand("study", "Grid refinement ratio table");
  ss->add_option("--surface", sy.surface)->required();
  ss->add_option("--grids", sy.grids)->delimiter(',');
  ss->add_option("--check", sy.check)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    ctx.threads = thread_cap();
    if (!ctx.report_path.empty()) require_writable(ctx.report_path);
    if (sg->parsed()) {
      ctx.command = "generate";
      return cmd_generate(ctx, gen);
    }
    if (sa->parsed()) {
      ctx.command = "analyze";
      return cmd_analyze(ctx, an);
    }
    if (st->parsed()) {
      ctx.command = "transform";
      return cmd_transform(ctx, tr);
    }
    if (sc->parsed()) {
      ctx.command = "connections";
      return cmd_connections(ctx, co);
    }
    if (sd->parsed()) {
      ctx.command = "duality";
      if (du.op != "degree" && du.input.empty()) throw UsageError("--input is required");
      return cmd_duality(ctx, du);
    }
    if (sl->parsed()) {
      ctx.command = "algebra-check";
      return cmd_algebra(ctx, al);
    }
    if (ss->parsed()) {
      ctx.command = "study";
      return cmd_study(ctx, sy);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    // Failed preconditions are check failures: report them and exit 2.
    try {
      emit(ctx, envelope(ctx, {{"error", error_json(e)}}, false));
    } catch (const std::exception&) {
    }
    std::cerr << "check failed: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
