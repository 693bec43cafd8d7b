#pragma once

// φ-modules and (φ,N)-modules over Q_p (modelled by Q with exact p-adic
// valuations), with their derived Hom complexes, tensor, dual and twists.

#include "hodgeforge/complex.hpp"

#include <optional>

namespace hodgeforge {

class ModuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite group acting linearly: multiplication table over {0..order−1} and
// one matrix per element.
struct GroupData {
  std::size_t order = 1;
  std::vector<std::vector<std::size_t>> table;
  std::vector<Mat> rep;

  static GroupData trivial(std::size_t dim) {
    return GroupData{1, {{0}}, {Mat::identity(dim)}};
  }

  std::size_t identity_element() const {
    for (std::size_t e = 0; e < order; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < order && ok; ++x) ok = table[e][x] == x && table[x][e] == x;
      if (ok) return e;
    }
    throw ModuleError("group table has no identity element");
  }

  // Empty string when valid.
  std::string violation(std::size_t dim) const {
    if (order == 0) return "group order must be positive";
    if (table.size() != order) return "group table has wrong size";
    for (const auto& row : table) {
      if (row.size() != order) return "group table has wrong size";
      for (auto x : row)
        if (x >= order) return "group table entry out of range";
    }
    if (rep.size() != order) return "group representation has wrong number of elements";
    for (const auto& r : rep)
      if (r.rows() != dim || r.cols() != dim) return "group element matrix has wrong size";
    std::size_t e;
    try {
      e = identity_element();
    } catch (const ModuleError& err) {
      return err.what();
    }
    if (!(rep[e] == Mat::identity(dim))) return "identity element does not act as identity";
    for (std::size_t g = 0; g < order; ++g)
      for (std::size_t h = 0; h < order; ++h)
        if (!(rep[table[g][h]] == rep[g] * rep[h])) return "ρ(gh) ≠ ρ(g)ρ(h)";
    return {};
  }
};

inline bool same_group(const GroupData& a, const GroupData& b) { return a.order == b.order && a.table == b.table; }

struct PhiModule {
  long p = 0;
  Mat phi;
  std::size_t dim() const { return phi.rows(); }
};

struct PhiNModule {
  long p = 0;
  Mat phi;
  Mat n;
  std::optional<GroupData> galois;

  std::size_t dim() const { return phi.rows(); }
  std::vector<Mat> reps() const { return galois ? galois->rep : std::vector<Mat>{}; }

  static PhiNModule unit(long p) { return PhiNModule{p, Mat::identity(1), Mat(1, 1), std::nullopt}; }

  friend bool operator==(const PhiNModule& a, const PhiNModule& b) {
    bool g = a.galois.has_value() == b.galois.has_value();
    if (g && a.galois) g = same_group(*a.galois, *b.galois) && a.galois->rep == b.galois->rep;
    return a.p == b.p && a.phi == b.phi && a.n == b.n && g;
  }
};

struct PhinReport {
  bool ok = true;
  std::string violation;
};

inline PhinReport validate_phin(const PhiNModule& d) {
  const std::size_t k = d.dim();
  if (d.p < 2) return {false, "p must be a prime"};
  if (!d.phi.square() || !d.n.square() || d.n.rows() != k) return {false, "φ and N must be square of the same size"};
  if (!inverse(d.phi)) return {false, "φ is not invertible"};
  if (!(d.n * d.phi == Rat(d.p) * d.phi * d.n)) return {false, "Nφ ≠ pφN"};
  if (!pow(d.n, static_cast<unsigned>(k)).is_zero()) return {false, "N is not nilpotent"};
  if (d.galois) {
    std::string v = d.galois->violation(k);
    if (!v.empty()) return {false, v};
    for (const auto& r : d.galois->rep) {
      if (!(r * d.phi == d.phi * r)) return {false, "group action does not commute with φ"};
      if (!(r * d.n == d.n * r)) return {false, "group action does not commute with N"};
    }
  }
  return {};
}

inline void require_valid(const PhiNModule& d) {
  auto r = validate_phin(d);
  if (!r.ok) throw ModuleError(r.violation);
}

inline PhiNModule tate_twist(const PhiNModule& d, int r) {
  PhiNModule t = d;
  t.phi = rat_pow(Rat(d.p), -r) * d.phi;
  return t;
}

inline std::optional<GroupData> combine_groups(const std::optional<GroupData>& a, std::size_t da,
                                               const std::optional<GroupData>& b, std::size_t db,
                                               const std::function<Mat(const Mat&, const Mat&)>& op) {
  if (!a && !b) return std::nullopt;
  if (a && b && !same_group(*a, *b)) throw ModuleError("group mismatch");
  const GroupData& g = a ? *a : *b;
  GroupData out{g.order, g.table, {}};
  for (std::size_t e = 0; e < g.order; ++e)
    out.rep.push_back(op(a ? a->rep[e] : Mat::identity(da), b ? b->rep[e] : Mat::identity(db)));
  return out;
}

inline PhiNModule tensor(const PhiNModule& a, const PhiNModule& b) {
  if (a.p != b.p) throw ModuleError("prime mismatch");
  PhiNModule t;
  t.p = a.p;
  t.phi = kron(a.phi, b.phi);
  t.n = kron(a.n, Mat::identity(b.dim())) + kron(Mat::identity(a.dim()), b.n);
  t.galois = combine_groups(a.galois, a.dim(), b.galois, b.dim(), [](const Mat& x, const Mat& y) { return kron(x, y); });
  return t;
}

inline PhiNModule dual(const PhiNModule& a) {
  PhiNModule t;
  t.p = a.p;
  t.phi = inverse_or_throw(a.phi, "φ").transpose();
  t.n = -a.n.transpose();
  if (a.galois) {
    t.galois = GroupData{a.galois->order, a.galois->table, {}};
    for (const auto& r : a.galois->rep) t.galois->rep.push_back(inverse_or_throw(r, "group element").transpose());
  }
  return t;
}

inline PhiNModule direct_sum(const PhiNModule& a, const PhiNModule& b) {
  if (a.p != b.p) throw ModuleError("prime mismatch");
  PhiNModule t;
  t.p = a.p;
  t.phi = hodgeforge::direct_sum(a.phi, b.phi);
  t.n = hodgeforge::direct_sum(a.n, b.n);
  t.galois = combine_groups(a.galois, a.dim(), b.galois, b.dim(),
                            [](const Mat& x, const Mat& y) { return hodgeforge::direct_sum(x, y); });
  return t;
}

// ---------------------------------------------------------------------------
// Complexes of (φ,N,G)-modules: differentials commute with φ, N and G.

struct PhiNComplex {
  long p = 0;
  int min_deg = 0;
  std::vector<PhiNModule> terms;
  std::vector<Mat> d;

  static PhiNComplex single(const PhiNModule& m, int deg = 0) { return PhiNComplex{m.p, deg, {m}, {}}; }

  bool empty() const { return terms.empty(); }
  int max_deg() const { return min_deg + static_cast<int>(terms.size()) - 1; }
  const PhiNModule* term(int n) const {
    if (n < min_deg || n > max_deg()) return nullptr;
    return &terms[n - min_deg];
  }
  std::size_t dim(int n) const { return term(n) ? term(n)->dim() : 0; }
  Mat phi(int n) const { return term(n) ? term(n)->phi : Mat(); }
  Mat nop(int n) const { return term(n) ? term(n)->n : Mat(); }
  std::vector<Mat> reps(int n) const { return term(n) ? term(n)->reps() : std::vector<Mat>{}; }
  bool has_group() const {
    return std::any_of(terms.begin(), terms.end(), [](const PhiNModule& m) { return m.galois.has_value(); });
  }

  ChainComplex underlying() const {
    ChainComplex c;
    c.min_deg = min_deg;
    for (const auto& t : terms) c.dims.push_back(t.dim());
    c.d = d;
    return c;
  }

  void check() const {
    for (const auto& t : terms) {
      if (t.p != p) throw ModuleError("prime mismatch inside complex");
      require_valid(t);
    }
    underlying().check();
    for (int k = min_deg; k < max_deg(); ++k) {
      const Mat& dk = d[k - min_deg];
      if (!(dk * phi(k) == phi(k + 1) * dk)) throw ModuleError("differential does not commute with φ");
      if (!(dk * nop(k) == nop(k + 1) * dk)) throw ModuleError("differential does not commute with N");
      auto ra = reps(k), rb = reps(k + 1);
      for (std::size_t g = 0; g < std::max(ra.size(), rb.size()); ++g) {
        Mat x = ra.empty() ? Mat::identity(dim(k)) : ra[g];
        Mat y = rb.empty() ? Mat::identity(dim(k + 1)) : rb[g];
        if (!(dk * x == y * dk)) throw ModuleError("differential does not commute with the group action");
      }
    }
  }
};

inline PhiNComplex tate_twist(const PhiNComplex& c, int r) {
  PhiNComplex t = c;
  for (auto& m : t.terms) m = tate_twist(m, r);
  return t;
}

// ---------------------------------------------------------------------------
// Hom♯ complexes.
//
// For complexes M, T let P = Hom^•_G(M, T). Hom♯(M, T) is the total complex of
//
//        P --δ1--> P
//        |δ2       |δ'2
//        P --δ'1-> P
//
// realised as Fib( Fib(δ1) --(δ2,δ'2)--> Fib(δ'1) ). In degree n its
// coordinates are [x ∈ P^n | a ∈ P^{n−1} | b ∈ P^{n−1} | w ∈ P^{n−2}].

enum class Slot { X = 0, A = 1, B = 2, W = 3 };
inline int slot_degree(Slot s) { return s == Slot::X ? 0 : (s == Slot::W ? 2 : 1); }

struct SharpComplex {
  long p = 0;
  HomComplex P;
  ChainComplex cx;

  std::size_t slot_offset(int n, Slot s) const {
    const std::size_t x = P.space(n).dim, a = P.space(n - 1).dim;
    switch (s) {
      case Slot::X: return 0;
      case Slot::A: return x;
      case Slot::B: return x + a;
      case Slot::W: return x + 2 * a;
    }
    return 0;
  }
  const HomSpace& slot_space(int n, Slot s) const { return P.space(n - slot_degree(s)); }

  Vec slot(const Vec& v, int n, Slot s) const {
    std::size_t off = slot_offset(n, s), len = slot_space(n, s).dim;
    return Vec(v.begin() + static_cast<long>(off), v.begin() + static_cast<long>(off + len));
  }
  void add_slot(Vec& v, int n, Slot s, const Vec& part, const Rat& c = 1) const {
    std::size_t off = slot_offset(n, s);
    for (std::size_t k = 0; k < part.size(); ++k) v[off + k] += c * part[k];
  }
  Vec zero(int n) const { return Vec(cx.dim(n)); }
};

inline SharpComplex hom_sharp(const PhiNComplex& m, const PhiNComplex& t) {
  if (m.p != t.p && !m.empty() && !t.empty()) throw ModuleError("prime mismatch");
  SharpComplex s;
  s.p = m.empty() ? t.p : m.p;
  const Rat p = s.p;
  ChainComplex mu = m.underlying(), tu = t.underlying();
  RepLookup rm, rt;
  if (m.has_group() || t.has_group()) {
    rm = [&m](int k) { return m.reps(k); };
    rt = [&t](int k) { return t.reps(k); };
  }
  s.P = make_hom_complex(mu, tu, rm, rt);
  const ChainComplex& P = s.P.cx;
  if (P.empty()) return s;
  auto op = [&](const std::function<Mat(int, int, const Mat&)>& f) {
    return ChainMap::make(P.min_deg, P.max_deg(), [&, f](int n) {
      return hom_operator(s.P.space(n), s.P.space(n), [&, n](int k, const Mat& x) {
        return std::map<int, Mat>{{k, f(n, k, x)}};
      });
    });
  };
  ChainMap d1 = op([&](int n, int k, const Mat& x) { return t.phi(k + n) * x - x * m.phi(k); });
  ChainMap d1p = op([&](int n, int k, const Mat& x) { return p * t.phi(k + n) * x - x * m.phi(k); });
  ChainMap d2 = op([&](int n, int k, const Mat& x) { return t.nop(k + n) * x - x * m.nop(k); });
  ChainMap d2p = op([&](int n, int k, const Mat& x) { return t.nop(k + n) * x - p * x * m.nop(k); });
  ChainComplex f1 = fiber(P, P, d1), f2 = fiber(P, P, d1p);
  ChainMap g = ChainMap::make(f1.min_deg, f1.max_deg(), [&](int n) {
    return hodgeforge::direct_sum(d2.at(n, P, P), d2p.at(n - 1, P, P));
  });
  s.cx = fiber(f1, f2, g);
  return s;
}

// Two-term complex Cone(δ)[−1] for φ-modules.
inline ChainComplex hom_sharp_phi(const PhiModule& d1, const PhiModule& d2) {
  if (d1.p != d2.p) throw ModuleError("prime mismatch");
  ChainComplex a{0, {d1.dim()}, {}, {}}, b{0, {d2.dim()}, {}, {}};
  HomComplex h = make_hom_complex(a, b);
  ChainMap delta = ChainMap::make(0, 0, [&](int) {
    return hom_operator(h.space(0), h.space(0), [&](int k, const Mat& x) {
      return std::map<int, Mat>{{k, d2.phi * x - x * d1.phi}};
    });
  });
  return fiber(h.cx, h.cx, delta);
}

inline ChainComplex hom_sharp_phiN(const PhiNModule& d1, const PhiNModule& d2) {
  if (d1.p != d2.p) throw ModuleError("prime mismatch");
  return hom_sharp(PhiNComplex::single(d1), PhiNComplex::single(d2)).cx;
}

// Composition Hom♯^i(T, U) × Hom♯^j(M, T) -> Hom♯^{i+j}(M, U).
//
// Writing an element as x + α a + β b + αβ w with α, β of degree one placed to
// the left of the Hom components, products follow the Koszul rule and
// α·β = −p αβ, β·α = αβ, α·α = β·β = 0.
inline Vec compose_sharp(const SharpComplex& tu, const Vec& g, int i, const SharpComplex& mt, const Vec& f, int j,
                         const SharpComplex& mu) {
  if (g.size() != tu.cx.dim(i) || f.size() != mt.cx.dim(j)) throw ModuleError("compose_sharp: degree out of range");
  Vec out = mu.zero(i + j);
  if (out.empty()) return out;
  const Rat p = mu.p;
  auto product = [&](Slot sg, Slot sf) -> std::pair<std::optional<Slot>, Rat> {
    if (sg == Slot::X) return {sf, 1};
    if (sf == Slot::X) return {sg, 1};
    if (sg == Slot::A && sf == Slot::B) return {Slot::W, -p};
    if (sg == Slot::B && sf == Slot::A) return {Slot::W, 1};
    return {std::nullopt, 0};
  };
  const Slot all[] = {Slot::X, Slot::A, Slot::B, Slot::W};
  for (Slot sg : all)
    for (Slot sf : all) {
      auto [res, coef] = product(sg, sf);
      if (!res) continue;
      const int pg = i - slot_degree(sg), pf = j - slot_degree(sf);
      const HomSpace& gs = tu.P.space(pg);
      const HomSpace& fs = mt.P.space(pf);
      const HomSpace& os = mu.P.space(pg + pf);
      if (gs.dim == 0 || fs.dim == 0 || os.dim == 0) continue;
      Vec part = compose_hom(gs, tu.slot(g, i, sg), fs, mt.slot(f, j, sf), os);
      Rat c = coef * ((pg * slot_degree(sf)) % 2 == 0 ? 1 : -1);
      mu.add_slot(out, i + j, *res, part, c);
    }
  return out;
}

// Degree-0 element of Hom♯(M, T) with x-slot given blockwise.
inline Vec sharp_from_x(const SharpComplex& s, const std::map<int, Mat>& x) {
  Vec v = s.zero(0);
  s.add_slot(v, 0, Slot::X, s.P.space(0).from_blocks(x));
  return v;
}

}  // namespace hodgeforge
