#include "cliffsurf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace cliffsurf {

namespace {

json terms_json(const Multivector& x) {
  json out = json::array();
  for (const Term& t : x.terms()) out.push_back({t.mask, t.coeff});
  return out;
}

Multivector terms_from_json(int r, const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Io, "multivector terms must be an array");
  std::vector<Term> terms;
  terms.reserve(j.size());
  for (const json& t : j) {
    if (!t.is_array() || t.size() != 2) throw Error(ErrorCode::Io, "term must be [mask, coeff]");
    const auto mask = t[0].get<std::uint64_t>();
    if (mask >> r) throw Error(ErrorCode::Io, "blade mask outside V_r");
    terms.push_back({static_cast<Mask>(mask), t[1].get<double>()});
  }
  return Multivector::from_terms(r, std::move(terms));
}

std::vector<double> doubles(const json& j, std::size_t n, const char* what) {
  auto v = j.get<std::vector<double>>();
  if (v.size() != n) throw Error(ErrorCode::Io, std::string(what) + " has the wrong length");
  return v;
}

}  // namespace

json to_json(const Multivector& x) { return {{"r", x.r()}, {"terms", terms_json(x)}}; }

Multivector multivector_from_json(const json& j) {
  try {
    return terms_from_json(j.at("r").get<int>(), j.at("terms"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("bad multivector JSON: ") + e.what());
  }
}

json to_json(const SurfaceGrid& g) {
  json values = json::array();
  for (const Multivector& x : g.values) values.push_back(terms_json(x));
  json out = {{"r", g.r},
              {"nu", g.shape.nu},
              {"nv", g.shape.nv},
              {"du", g.shape.du},
              {"dv", g.shape.dv},
              {"u0", g.shape.u0},
              {"v0", g.shape.v0},
              {"periodic_u", g.shape.periodic_u},
              {"periodic_v", g.shape.periodic_v},
              {"values", std::move(values)}};
  if (g.structure) {
    out["structure"] = {{"E", g.structure->E}, {"F", g.structure->F}, {"G", g.structure->G}};
  }
  return out;
}

SurfaceGrid surface_from_json(const json& j) {
  try {
    GridShape s;
    s.nu = j.at("nu").get<int>();
    s.nv = j.at("nv").get<int>();
    s.du = j.at("du").get<double>();
    s.dv = j.at("dv").get<double>();
    s.u0 = j.value("u0", 0.0);
    s.v0 = j.value("v0", 0.0);
    s.periodic_u = j.value("periodic_u", false);
    s.periodic_v = j.value("periodic_v", false);
    check_shape(s);
    const int r = j.at("r").get<int>();
    SurfaceGrid g(r, s);
    const json& values = j.at("values");
    if (!values.is_array() || values.size() != s.size()) {
      throw Error(ErrorCode::Io, "values must hold nu*nv nodes");
    }
    for (std::size_t k = 0; k < s.size(); ++k) g.values[k] = terms_from_json(r, values[k]);
    if (j.contains("structure")) {
      const json& st = j["structure"];
      g.structure = MetricField::from_efg(s, doubles(st.at("E"), s.size(), "E"),
                                          doubles(st.at("F"), s.size(), "F"),
                                          doubles(st.at("G"), s.size(), "G"));
    }
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("bad surface JSON: ") + e.what());
  }
}

json to_json(const ResidualReport& rep) {
  return {{"name", rep.name},         {"max", rep.max_norm},     {"mean", rep.mean_norm},
          {"nu", rep.nu},             {"nv", rep.nv},            {"measured", rep.measured},
          {"masked", rep.masked},     {"notes", rep.notes}};
}

void write_residual_csv(std::ostream& os, const ResidualReport& rep, const GridShape& shape) {
  if (rep.node_values.size() != shape.size()) {
    throw Error(ErrorCode::InvalidArgument, "report has no per-node values for this grid");
  }
  os << "i,j,u,v,residual\n";
  char buf[128];
  for (int i = 0; i < shape.nu; ++i) {
    for (int j = 0; j < shape.nv; ++j) {
      const double val = rep.node_values[shape.index(i, j)];
      if (std::isnan(val)) continue;
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", i, j, shape.u(i), shape.v(j),
                    val);
      os << buf;
    }
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

SurfaceGrid read_surface(const std::string& path) { return surface_from_json(read_json(path)); }

void write_surface(const std::string& path, const SurfaceGrid& g) { write_json(path, to_json(g)); }

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace cliffsurf
