#pragma once

// JSON encoding. Rationals are strings "a/b" (integers also accepted on
// input), matrices are arrays of rows, filtrations map a jump i to a list of
// basis vectors of F^i. Output is canonical: keys sorted, filtrations
// normalized, two-space indentation.

#include "hodgeforge/syntomic.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace hodgeforge::io {

using json = nlohmann::json;

// Structurally malformed input; `where` is a JSON pointer.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& where, const std::string& what)
      : std::runtime_error((where.empty() ? std::string("/") : where) + ": " + what) {}
};

// Re-checks an invariant of freshly loaded data; a violation is reported as bad input.
template <class F>
void recheck(const std::string& at, F&& f) {
  try {
    f();
  } catch (const ModuleError& e) {
    throw InputError(at, e.what());
  } catch (const ComplexError& e) {
    throw InputError(at, e.what());
  } catch (const FiltrationError& e) {
    throw InputError(at, e.what());
  }
}

inline const json& field(const json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) throw InputError(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(at, "missing field \"" + key + "\"");
  return *it;
}

inline Rat rat_from(const json& j, const std::string& at) {
  try {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
  } catch (const std::exception&) {
    throw InputError(at, "not a rational number");
  }
  throw InputError(at, "expected a rational as a string \"a/b\" or an integer");
}

inline long int_from(const json& j, const std::string& at) {
  if (!j.is_number_integer()) throw InputError(at, "expected an integer");
  return j.get<long>();
}

inline Vec vec_from(const json& j, std::size_t n, const std::string& at) {
  if (!j.is_array() || j.size() != n) throw InputError(at, "expected an array of " + std::to_string(n) + " rationals");
  Vec v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = rat_from(j[k], at + "/" + std::to_string(k));
  return v;
}

inline Mat mat_from(const json& j, std::size_t rows, std::size_t cols, const std::string& at) {
  if (!j.is_array()) throw InputError(at, "expected a matrix (array of rows)");
  if (rows == 0 || cols == 0) {
    for (const auto& r : j)
      if (!r.is_array() || !r.empty()) throw InputError(at, "expected an empty matrix");
    return Mat(rows, cols);
  }
  if (j.size() != rows) throw InputError(at, "expected " + std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    Vec v = vec_from(j[r], cols, at + "/" + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = v[c];
  }
  return m;
}

inline json to_json(const Rat& q) { return to_string(q); }

inline json to_json(const Mat& m) {
  json j = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    j.push_back(row);
  }
  return j;
}

inline json to_json(const Vec& v) {
  json j = json::array();
  for (const auto& x : v) j.push_back(to_string(x));
  return j;
}

inline FilteredSpace filtration_from(const json& j, std::size_t dim, const std::string& at) {
  if (!j.is_object()) throw InputError(at, "expected an object mapping jumps to bases");
  std::map<int, Subspace> steps;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string here = at + "/" + it.key();
    int i;
    try {
      std::size_t used = 0;
      i = std::stoi(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError(here, "filtration key is not an integer");
    }
    if (!it.value().is_array()) throw InputError(here, "expected a list of basis vectors");
    std::vector<Vec> vs;
    for (std::size_t k = 0; k < it.value().size(); ++k) vs.push_back(vec_from(it.value()[k], dim, here + "/" + std::to_string(k)));
    steps.emplace(i, Subspace::span(dim, vs));
  }
  if (dim && steps.empty()) throw InputError(at, "filtration has no steps");
  try {
    return FilteredSpace::from_steps(dim, steps);
  } catch (const FiltrationError& e) {
    throw InputError(at, e.what());
  }
}

inline json to_json(const FilteredSpace& f) {
  json j = json::object();
  for (const auto& [i, s] : f.jumps()) {
    json basis = json::array();
    for (std::size_t k = 0; k < s.dim(); ++k) basis.push_back(to_json(s.vector(k)));
    j[std::to_string(i)] = basis;
  }
  return j;
}

inline std::optional<GroupData> group_from(const json& j, std::size_t dim, const std::string& at) {
  if (!j.contains("group") || j["group"].is_null()) return std::nullopt;
  const json& g = j["group"];
  const std::string here = at + "/group";
  GroupData out;
  long order = int_from(field(g, "order", here), here + "/order");
  if (order <= 0) throw InputError(here + "/order", "group order must be positive");
  out.order = static_cast<std::size_t>(order);
  const json& t = field(g, "table", here);
  if (!t.is_array() || t.size() != out.order) throw InputError(here + "/table", "expected an order × order table");
  for (std::size_t r = 0; r < out.order; ++r) {
    const json& row = t[r];
    if (!row.is_array() || row.size() != out.order) throw InputError(here + "/table/" + std::to_string(r), "wrong row length");
    std::vector<std::size_t> vals;
    for (std::size_t c = 0; c < out.order; ++c) {
      long x = int_from(row[c], here + "/table/" + std::to_string(r) + "/" + std::to_string(c));
      if (x < 0 || x >= order) throw InputError(here + "/table/" + std::to_string(r) + "/" + std::to_string(c), "element out of range");
      vals.push_back(static_cast<std::size_t>(x));
    }
    out.table.push_back(vals);
  }
  const json& rep = field(g, "rep", here);
  if (!rep.is_array() || rep.size() != out.order) throw InputError(here + "/rep", "expected one matrix per element");
  for (std::size_t e = 0; e < out.order; ++e) out.rep.push_back(mat_from(rep[e], dim, dim, here + "/rep/" + std::to_string(e)));
  return out;
}

inline json to_json(const GroupData& g) {
  json j;
  j["order"] = g.order;
  j["table"] = g.table;
  json rep = json::array();
  for (const auto& r : g.rep) rep.push_back(to_json(r));
  j["rep"] = rep;
  return j;
}

inline std::size_t dim_from(const json& j, const std::string& at) {
  long d = int_from(field(j, "dim", at), at + "/dim");
  if (d < 0) throw InputError(at + "/dim", "dimension must be non-negative");
  return static_cast<std::size_t>(d);
}

inline long prime_from(const json& j, const std::string& at) {
  long p = int_from(field(j, "p", at), at + "/p");
  if (p < 2 || mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 25) == 0)
    throw InputError(at + "/p", "p must be a prime");
  return p;
}

// (φ, N, group) part; `p` is taken from the enclosing object.
inline PhiNModule phin_from(const json& j, long p, const std::string& at) {
  PhiNModule m;
  m.p = p;
  std::size_t d = dim_from(j, at);
  m.phi = mat_from(field(j, "phi", at), d, d, at + "/phi");
  m.n = j.contains("n") ? mat_from(j["n"], d, d, at + "/n") : Mat(d, d);
  m.galois = group_from(j, d, at);
  return m;
}

inline FilteredPhiNModule module_from(const json& j, long p, const std::string& at) {
  FilteredPhiNModule m;
  m.base = phin_from(j, p, at);
  std::size_t d = m.dim();
  m.fil = j.contains("filtration") ? filtration_from(j["filtration"], d, at + "/filtration") : FilteredSpace::trivial(d);
  m.comparison = j.contains("comparison") ? mat_from(j["comparison"], d, d, at + "/comparison") : Mat::identity(d);
  std::string v = module_violation(m);
  if (!v.empty()) throw InputError(at, v);
  return m;
}

inline FilteredPhiNModule module_from(const json& j) {
  return module_from(j, prime_from(j, ""), "");
}

// Without "kind" and "p": used for terms of complexes.
inline json module_body(const FilteredPhiNModule& m) {
  json j;
  j["dim"] = m.dim();
  j["phi"] = to_json(m.base.phi);
  j["n"] = to_json(m.base.n);
  j["filtration"] = to_json(m.fil);
  if (!(m.comparison == Mat::identity(m.dim()))) j["comparison"] = to_json(m.comparison);
  if (m.galois()) j["group"] = to_json(*m.galois());
  return j;
}

inline json to_json(const FilteredPhiNModule& m) {
  json j = module_body(m);
  j["kind"] = "module";
  j["p"] = m.p();
  return j;
}

struct ComplexFile {
  ModuleComplex complex;
  std::optional<LefschetzData> lefschetz;
};

inline ComplexFile complex_from(const json& j) {
  ComplexFile out;
  long p = prime_from(j, "");
  ModuleComplex& c = out.complex;
  c.min_deg = static_cast<int>(int_from(field(j, "min_deg", ""), "/min_deg"));
  const json& terms = field(j, "terms", "");
  if (!terms.is_array()) throw InputError("/terms", "expected an array of modules");
  for (std::size_t k = 0; k < terms.size(); ++k) c.terms.push_back(module_from(terms[k], p, "/terms/" + std::to_string(k)));
  const json& d = field(j, "d", "");
  if (!d.is_array() || d.size() + 1 != std::max<std::size_t>(c.terms.size(), 1))
    throw InputError("/d", "expected one differential between consecutive terms");
  for (std::size_t k = 0; k < d.size(); ++k)
    c.d.push_back(mat_from(d[k], c.terms[k + 1].dim(), c.terms[k].dim(), "/d/" + std::to_string(k)));
  recheck("", [&] { c.check(); });
  if (j.contains("lefschetz")) {
    const json& l = j["lefschetz"];
    LefschetzData ld;
    ld.middle = static_cast<int>(int_from(field(l, "middle", "/lefschetz"), "/lefschetz/middle"));
    const json& maps = field(l, "maps", "/lefschetz");
    if (!maps.is_object()) throw InputError("/lefschetz/maps", "expected an object keyed by degree");
    for (auto it = maps.begin(); it != maps.end(); ++it) {
      int n;
      try {
        n = std::stoi(it.key());
      } catch (const std::exception&) {
        throw InputError("/lefschetz/maps/" + it.key(), "degree is not an integer");
      }
      ld.maps[n] = mat_from(it.value(), c.dim(n + 2), c.dim(n), "/lefschetz/maps/" + it.key());
    }
    out.lefschetz = ld;
  }
  return out;
}

inline json to_json(const ModuleComplex& c, const std::optional<LefschetzData>& l = std::nullopt) {
  json j;
  j["kind"] = "module_complex";
  j["p"] = c.p();
  j["min_deg"] = c.min_deg;
  json terms = json::array(), d = json::array();
  for (const auto& t : c.terms) terms.push_back(module_body(t));
  for (const auto& m : c.d) d.push_back(to_json(m));
  j["terms"] = terms;
  j["d"] = d;
  if (l) {
    json maps = json::object();
    for (const auto& [n, m] : l->maps) maps[std::to_string(n)] = to_json(m);
    j["lefschetz"] = {{"middle", l->middle}, {"maps", maps}};
  }
  return j;
}

inline PadicHodgeComplex ph_from(const json& j) {
  PadicHodgeComplex m;
  long p = prime_from(j, "");
  m.m0.p = p;
  const json& z = field(j, "zero_side", "");
  m.m0.min_deg = static_cast<int>(int_from(field(z, "min_deg", "/zero_side"), "/zero_side/min_deg"));
  const json& zt = field(z, "terms", "/zero_side");
  if (!zt.is_array()) throw InputError("/zero_side/terms", "expected an array");
  for (std::size_t k = 0; k < zt.size(); ++k) m.m0.terms.push_back(phin_from(zt[k], p, "/zero_side/terms/" + std::to_string(k)));
  const json& zd = field(z, "d", "/zero_side");
  if (!zd.is_array() || zd.size() + 1 != std::max<std::size_t>(m.m0.terms.size(), 1))
    throw InputError("/zero_side/d", "expected one differential between consecutive terms");
  for (std::size_t k = 0; k < zd.size(); ++k)
    m.m0.d.push_back(mat_from(zd[k], m.m0.terms[k + 1].dim(), m.m0.terms[k].dim(), "/zero_side/d/" + std::to_string(k)));
  const json& r = field(j, "dr_side", "");
  m.mk.min_deg = static_cast<int>(int_from(field(r, "min_deg", "/dr_side"), "/dr_side/min_deg"));
  const json& rt = field(r, "terms", "/dr_side");
  if (!rt.is_array()) throw InputError("/dr_side/terms", "expected an array");
  for (std::size_t k = 0; k < rt.size(); ++k) {
    std::string at = "/dr_side/terms/" + std::to_string(k);
    std::size_t d = dim_from(rt[k], at);
    m.mk.terms.push_back(rt[k].contains("filtration") ? filtration_from(rt[k]["filtration"], d, at + "/filtration")
                                                       : FilteredSpace::trivial(d));
  }
  const json& rd = field(r, "d", "/dr_side");
  if (!rd.is_array() || rd.size() + 1 != std::max<std::size_t>(m.mk.terms.size(), 1))
    throw InputError("/dr_side/d", "expected one differential between consecutive terms");
  for (std::size_t k = 0; k < rd.size(); ++k)
    m.mk.d.push_back(mat_from(rd[k], m.mk.terms[k + 1].dim(), m.mk.terms[k].dim(), "/dr_side/d/" + std::to_string(k)));
  const json& a = field(j, "a", "");
  m.a.min_deg = static_cast<int>(int_from(field(a, "min_deg", "/a"), "/a/min_deg"));
  const json& maps = field(a, "maps", "/a");
  if (!maps.is_array()) throw InputError("/a/maps", "expected an array");
  for (std::size_t k = 0; k < maps.size(); ++k) {
    int n = m.a.min_deg + static_cast<int>(k);
    m.a.maps.push_back(mat_from(maps[k], m.mk.term(n).dim(), m.m0.dim(n), "/a/maps/" + std::to_string(k)));
  }
  recheck("", [&] { require_valid(m); });
  return m;
}

inline json to_json(const PadicHodgeComplex& m) {
  json j;
  j["kind"] = "ph_complex";
  j["p"] = m.p();
  json zt = json::array(), zd = json::array(), rt = json::array(), rd = json::array(), am = json::array();
  for (const auto& t : m.m0.terms) {
    json x;
    x["dim"] = t.dim();
    x["phi"] = to_json(t.phi);
    x["n"] = to_json(t.n);
    if (t.galois) x["group"] = to_json(*t.galois);
    zt.push_back(x);
  }
  for (const auto& d : m.m0.d) zd.push_back(to_json(d));
  for (const auto& t : m.mk.terms) rt.push_back({{"dim", t.dim()}, {"filtration", to_json(t)}});
  for (const auto& d : m.mk.d) rd.push_back(to_json(d));
  for (const auto& a : m.a.maps) am.push_back(to_json(a));
  j["zero_side"] = {{"min_deg", m.m0.min_deg}, {"terms", zt}, {"d", zd}};
  j["dr_side"] = {{"min_deg", m.mk.min_deg}, {"terms", rt}, {"d", rd}};
  j["a"] = {{"min_deg", m.a.min_deg}, {"maps", am}};
  return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw InputError("", std::string("JSON parse error: ") + e.what());
  }
}

inline std::string kind_of(const json& j) {
  if (!j.is_object()) throw InputError("", "expected a JSON object");
  if (!j.contains("kind")) return "module";
  if (!j["kind"].is_string()) throw InputError("/kind", "expected a string");
  std::string k = j["kind"].get<std::string>();
  if (k != "module" && k != "module_complex" && k != "ph_complex") throw InputError("/kind", "unknown kind \"" + k + "\"");
  return k;
}

// Any input as a p-adic Hodge complex.
inline PadicHodgeComplex as_ph(const json& j) {
  std::string k = kind_of(j);
  if (k == "module") return theta(module_from(j));
  if (k == "module_complex") return theta(complex_from(j).complex);
  return ph_from(j);
}

inline ModuleComplex as_module_complex(const json& j) {
  std::string k = kind_of(j);
  if (k == "module") return ModuleComplex::single(module_from(j));
  if (k == "module_complex") return complex_from(j).complex;
  throw InputError("/kind", "expected a module or a module complex");
}

}  // namespace hodgeforge::io
