#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "cliffsurf/calculus.hpp"
#include "cliffsurf/io.hpp"
#include "cliffsurf/study.hpp"
#include "cliffsurf/zoo.hpp"

using namespace cliffsurf;

TEST_CASE("surface JSON round trip is exact, structure included") {
  const SurfaceGrid f = generate(SurfaceKind::Lawson, 12);
  const SurfaceGrid g = surface_from_json(json::parse(to_json(f).dump()));
  CHECK(g.r == f.r);
  CHECK(g.shape.nu == f.shape.nu);
  CHECK(g.shape.du == f.shape.du);
  CHECK(g.shape.periodic_u == f.shape.periodic_u);
  REQUIRE(g.structure.has_value());
  CHECK(g.structure->E == f.structure->E);
  for (std::size_t k = 0; k < f.values.size(); ++k) CHECK((g.values[k] - f.values[k]).is_zero());
}

TEST_CASE("malformed JSON is an Io error") {
  CHECK_THROWS_AS(surface_from_json(json::parse(R"({"r":3})")), Error);
  CHECK_THROWS_AS(multivector_from_json(json::parse(R"({"r":3,"terms":[[8,1.0]]})")), Error);
  CHECK_THROWS_AS(read_surface("/nonexistent/file.json"), Error);
}

TEST_CASE("residual report JSON and CSV") {
  const SurfaceGrid f = generate(SurfaceKind::Catenoid, 16);
  ResidualOptions opts;
  opts.keep_node_values = true;
  const ResidualReport r = conformality_residual(f, gauss_map(f), opts);
  const json j = to_json(r);
  CHECK(j["name"] == "conformality");
  CHECK(j["max"].get<double>() == r.max_norm);
  std::ostringstream os;
  write_residual_csv(os, r, f.shape);
  const std::string csv = os.str();
  CHECK(csv.rfind("i,j,u,v,residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 16 * 16 - static_cast<long>(r.masked));
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("convergence classification") {
  CHECK(classify_convergence("s", "c", {32, 64, 128}, {4e-2, 1e-2, 2.5e-3}).verdict == "second_order");
  CHECK(classify_convergence("s", "c", {32, 64}, {1e-14, 3e-14}).verdict == "exact");
  CHECK_FALSE(classify_convergence("s", "c", {32, 64}, {1e-2, 5e-3}).pass);
  CHECK_THROWS_AS(classify_convergence("s", "c", {32}, {1.0}), Error);
}

TEST_CASE("parallel_for matches the serial result") {
  std::vector<int> a(100), b(100);
  parallel_for(100, 1, [&](std::size_t k) { a[k] = static_cast<int>(k * k); });
  parallel_for(100, 4, [&](std::size_t k) { b[k] = static_cast<int>(k * k); });
  CHECK(a == b);
  CHECK_THROWS(parallel_for(10, 3, [](std::size_t k) {
    if (k == 7) throw Error(ErrorCode::InvalidArgument, "boom");
  }));
}
