#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cliffsurf/multivector.hpp"

namespace cliffsurf {

// Dense random element with coefficients uniform in [-1, 1].
Multivector random_multivector(int r, std::mt19937_64& rng);
Multivector random_vector(int r, std::mt19937_64& rng);
Multivector random_unit_vector(int r, std::mt19937_64& rng);
// Product of `factors` random unit vectors.
Multivector random_versor(int r, int factors, std::mt19937_64& rng);

struct PropertyResult {
  std::string name;
  int trials = 0;
  double worst = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Seeded identity families: products, involutions, norm map, volume forms,
// inverses, reflections and rotations.
std::vector<PropertyResult> algebra_property_suite(int r, int trials, std::uint64_t seed);

}  // namespace cliffsurf
