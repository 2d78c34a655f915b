#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cliffsurf/grid.hpp"

namespace cliffsurf {

struct ConvergenceWindow {
  double lo = 3.2;
  double hi = 4.8;
  // Every value at or below this counts as exact (roundoff) convergence.
  double exact_floor = 1e-10;
};

struct ConvergenceStudy {
  std::string surface;
  std::string check;
  std::vector<int> grids;
  std::vector<double> values;
  // values[k] / values[k+1]
  std::vector<double> ratios;
  bool exact = false;
  bool pass = false;
  std::string verdict;
};

// Second order when every ratio lies in the window; exact when all values sit at roundoff.
ConvergenceStudy classify_convergence(std::string surface, std::string check,
                                      std::vector<int> grids, std::vector<double> values,
                                      const ConvergenceWindow& window = {});

// Surface by name: zoo kinds plus "catenoid_gauss" (sphere-valued Gauss map of the
// catenoid), "perturbed_torus", "sheared_plane", "curve_sweep".
SurfaceGrid named_surface(const std::string& name, int n);
std::vector<std::string> surface_names();

// Scalar residual for a named check on an n x n grid of the named surface.
double run_check(const std::string& check, const std::string& surface, int n);
std::vector<std::string> check_names();

// Runs run_check per grid, in parallel over at most `threads` workers.
ConvergenceStudy study(const std::string& surface, const std::vector<int>& grids,
                       const std::string& check, int threads = 1,
                       const ConvergenceWindow& window = {});

// Runs fn(k) for k in [0, n) on at most `threads` threads.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace cliffsurf
