#include "cliffsurf/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "cliffsurf/calculus.hpp"
#include "cliffsurf/connections.hpp"
#include "cliffsurf/duality.hpp"
#include "cliffsurf/transforms.hpp"
#include "cliffsurf/zoo.hpp"

namespace cliffsurf {

ConvergenceStudy classify_convergence(std::string surface, std::string check,
                                      std::vector<int> grids, std::vector<double> values,
                                      const ConvergenceWindow& window) {
  if (grids.size() != values.size() || grids.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "convergence study needs at least two grids");
  }
  ConvergenceStudy s;
  s.surface = std::move(surface);
  s.check = std::move(check);
  s.grids = std::move(grids);
  s.values = std::move(values);
  for (std::size_t k = 0; k + 1 < s.values.size(); ++k) {
    const double next = s.values[k + 1];
    s.ratios.push_back(next > 0.0 ? s.values[k] / next : INFINITY);
  }
  s.exact = std::all_of(s.values.begin(), s.values.end(),
                        [&](double v) { return v <= window.exact_floor; });
  const bool second_order = std::all_of(s.ratios.begin(), s.ratios.end(), [&](double q) {
    return q >= window.lo && q <= window.hi;
  });
  s.pass = s.exact || second_order;
  s.verdict = s.exact ? "exact" : (second_order ? "second_order" : "fail");
  return s;
}

SurfaceGrid named_surface(const std::string& name, int n) {
  if (auto kind = surface_kind_from_string(name)) return generate(*kind, n);
  if (name == "catenoid_gauss") return gauss_map(generate(SurfaceKind::Catenoid, n));
  if (name == "perturbed_torus") return perturbed_torus(n, n);
  if (name == "sheared_plane") return sheared_plane(n, n);
  if (name == "curve_sweep") return curve_sweep(n, n);
  throw Error(ErrorCode::InvalidArgument, "unknown surface: " + name);
}

std::vector<std::string> surface_names() {
  return {"plane",        "round_sphere",   "catenoid",        "helicoid",
          "clifford_torus", "lawson",       "graph",           "catenoid_gauss",
          "perturbed_torus", "sheared_plane", "curve_sweep"};
}

namespace {

using CheckFn = std::function<double(const SurfaceGrid&)>;

const std::map<std::string, CheckFn>& checks() {
  static const std::map<std::string, CheckFn> table = {
      {"conformality",
       [](const SurfaceGrid& f) { return conformality_residual(f, gauss_map(f)).max_norm; }},
      {"hopf", [](const SurfaceGrid& f) { return hopf_report(f, gauss_map(f)).max_norm; }},
      {"mcv", [](const SurfaceGrid& f) { return mcv_identity_residual(f, gauss_map(f)).max_norm; }},
      {"harmonicity", [](const SurfaceGrid& f) { return harmonicity_residual(f).max_norm; }},
      {"polar",
       [](const SurfaceGrid& f) {
         const SurfaceGrid N = gauss_map(f);
         return polar_dual_residual(polar_dual(f, N), N, f).max_norm;
       }},
      {"bipolar_energy",
       [](const SurfaceGrid& f) { return bipolar_energy_residual(f, gauss_map(f)).max_norm; }},
      {"sequence",
       [](const SurfaceGrid& f) { return sequence_darboux_relation(f, 1).combined.max_norm; }},
      {"darboux",
       [](const SurfaceGrid& f) {
         const SurfaceGrid N = gauss_map(f);
         const bool sphere = f.r >= 4;
         return darboux(f, N, lambda_recipe(sphere ? "fN" : "N", f, N), Side::Right)
             .defining.max_norm;
       }},
      {"darboux_connection",
       [](const SurfaceGrid& f) {
         const SurfaceGrid N = gauss_map(f);
         const DarbouxResult d =
             darboux(f, N, lambda_recipe(f.r >= 4 ? "fN" : "N", f, N), Side::Right);
         return darboux_connection_residual(d.f_sharp, d.T, Side::Right).max_norm;
       }},
      {"lambda_circle",
       [](const SurfaceGrid& f) {
         return lambda_connection_curvature(f, 0.0, 1.0, PhiVariant::PhiTilde).curvature.max_norm;
       }},
  };
  return table;
}

}  // namespace

double run_check(const std::string& check, const std::string& surface, int n) {
  const auto& table = checks();
  auto it = table.find(check);
  if (it == table.end()) throw Error(ErrorCode::InvalidArgument, "unknown check: " + check);
  return it->second(named_surface(surface, n));
}

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : checks()) out.push_back(name);
  return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ConvergenceStudy study(const std::string& surface, const std::vector<int>& grids,
                       const std::string& check, int threads, const ConvergenceWindow& window) {
  std::vector<double> values(grids.size());
  parallel_for(grids.size(), threads,
               [&](std::size_t k) { values[k] = run_check(check, surface, grids[k]); });
  return classify_convergence(surface, check, grids, std::move(values), window);
}

}  // namespace cliffsurf
