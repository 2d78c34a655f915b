#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cliffsurf/grid.hpp"

namespace cliffsurf {

using nlohmann::json;

// {"r":4,"terms":[[mask,coeff],...]}
json to_json(const Multivector& x);
Multivector multivector_from_json(const json& j);

// {"r","nu","nv","du","dv","u0","v0","periodic_u","periodic_v","values":[[[mask,coeff],...],...]}
// row-major; optional "structure":{"E":[...],"F":[...],"G":[...]}.
json to_json(const SurfaceGrid& g);
SurfaceGrid surface_from_json(const json& j);

json to_json(const ResidualReport& rep);

// Columns i,j,u,v,residual; requires node_values (keep_node_values).
void write_residual_csv(std::ostream& os, const ResidualReport& rep, const GridShape& shape);

SurfaceGrid read_surface(const std::string& path);
void write_surface(const std::string& path, const SurfaceGrid& g);
json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t x);

}  // namespace cliffsurf
