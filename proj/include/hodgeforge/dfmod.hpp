#pragma once

// Filtered (φ,N,G)-modules: weak admissibility, the fiber complex Hom♭
// computing derived Hom in the filtered category, H^i_st, extension
// construction and kernels/cokernels.

#include "hodgeforge/filtered.hpp"
#include "hodgeforge/invariant.hpp"
#include "hodgeforge/phimod.hpp"

#include <random>

namespace hodgeforge {

// D_0 with (φ, N, ρ), a filtered D_K, and a linear isomorphism D_0 -> D_K.
struct FilteredPhiNModule {
  PhiNModule base;
  FilteredSpace fil;
  Mat comparison;

  long p() const { return base.p; }
  std::size_t dim() const { return base.dim(); }
  const std::optional<GroupData>& galois() const { return base.galois; }

  static FilteredPhiNModule make(const PhiNModule& b, const FilteredSpace& f) {
    return FilteredPhiNModule{b, f, Mat::identity(b.dim())};
  }
  static FilteredPhiNModule unit(long p) { return make(PhiNModule::unit(p), FilteredSpace::trivial(1)); }

  friend bool operator==(const FilteredPhiNModule& a, const FilteredPhiNModule& b) {
    return a.base == b.base && a.fil == b.fil && a.comparison == b.comparison;
  }
};

inline std::string module_violation(const FilteredPhiNModule& d) {
  auto r = validate_phin(d.base);
  if (!r.ok) return r.violation;
  if (d.fil.dim() != d.dim()) return "filtration dimension differs from module dimension";
  if (!d.comparison.square() || d.comparison.rows() != d.dim()) return "comparison has wrong shape";
  if (!inverse(d.comparison)) return "comparison is not invertible";
  return {};
}

inline void require_valid(const FilteredPhiNModule& d) {
  std::string v = module_violation(d);
  if (!v.empty()) throw ModuleError(v);
}

// Q_p(r): φ = p^{−r}, single filtration jump at −r.
inline FilteredPhiNModule qp(long p, int r) {
  return FilteredPhiNModule::make(PhiNModule{p, Mat{{rat_pow(Rat(p), -r)}}, Mat(1, 1), std::nullopt},
                                  FilteredSpace::trivial(1, -r));
}

inline FilteredPhiNModule tate_twist(const FilteredPhiNModule& d, int r) {
  return FilteredPhiNModule{tate_twist(d.base, r), d.fil.shifted(r), d.comparison};
}

inline FilteredPhiNModule tensor(const FilteredPhiNModule& a, const FilteredPhiNModule& b) {
  return FilteredPhiNModule{tensor(a.base, b.base), tensor(a.fil, b.fil), kron(a.comparison, b.comparison)};
}

inline FilteredPhiNModule dual(const FilteredPhiNModule& a) {
  Mat ci = inverse_or_throw(a.comparison, "comparison").transpose();
  return FilteredPhiNModule{dual(a.base), dual(a.fil), ci};
}

inline FilteredPhiNModule direct_sum(const FilteredPhiNModule& a, const FilteredPhiNModule& b) {
  return FilteredPhiNModule{direct_sum(a.base, b.base), direct_sum(a.fil, b.fil),
                            hodgeforge::direct_sum(a.comparison, b.comparison)};
}

// Transport of structure along g: D_0 -> D_0' (invertible), keeping D_K fixed.
inline FilteredPhiNModule change_basis(const FilteredPhiNModule& d, const Mat& g) {
  Mat gi = inverse_or_throw(g, "change of basis");
  FilteredPhiNModule out = d;
  out.base.phi = g * d.base.phi * gi;
  out.base.n = g * d.base.n * gi;
  if (out.base.galois)
    for (auto& r : out.base.galois->rep) r = g * r * gi;
  out.comparison = d.comparison * gi;
  return out;
}

// Same, moving D_K along h as well.
inline FilteredPhiNModule change_basis(const FilteredPhiNModule& d, const Mat& g, const Mat& h) {
  FilteredPhiNModule out = change_basis(d, g);
  out.fil = d.fil.transported(h);
  out.comparison = h * out.comparison;
  return out;
}

inline long t_N(const PhiNModule& d) {
  if (d.dim() == 0) return 0;
  Rat det_phi = det(d.phi);
  if (det_phi == 0) throw ModuleError("φ is not invertible");
  return vp(det_phi, d.p);
}
inline long t_N(const FilteredPhiNModule& d) { return t_N(d.base); }
inline long t_H(const FilteredPhiNModule& d) { return d.fil.t_H(); }

// Stable subspace W ⊆ D_0 (columns of b) as a submodule with induced structure.
inline FilteredPhiNModule submodule(const FilteredPhiNModule& d, const Mat& b) {
  FilteredPhiNModule s;
  s.base.p = d.p();
  s.base.phi = restrict_map(d.base.phi, b, b);
  s.base.n = restrict_map(d.base.n, b, b);
  if (d.galois()) {
    s.base.galois = GroupData{d.galois()->order, d.galois()->table, {}};
    for (const auto& r : d.galois()->rep) s.base.galois->rep.push_back(restrict_map(r, b, b));
  }
  Mat cb = d.comparison * b;
  s.fil = d.fil.restricted(cb);
  s.comparison = Mat::identity(b.cols());
  return s;
}

inline FilteredPhiNModule quotient_module(const FilteredPhiNModule& d, const Subspace& w) {
  Mat q = quotient_map(w), sec = quotient_section(w);
  FilteredPhiNModule s;
  s.base.p = d.p();
  s.base.phi = q * d.base.phi * sec;
  s.base.n = q * d.base.n * sec;
  if (d.galois()) {
    s.base.galois = GroupData{d.galois()->order, d.galois()->table, {}};
    for (const auto& r : d.galois()->rep) s.base.galois->rep.push_back(q * r * sec);
  }
  Mat ci = inverse_or_throw(d.comparison, "comparison");
  s.fil = d.fil.pushed(q * ci);
  s.comparison = Mat::identity(q.rows());
  return s;
}

inline std::vector<Mat> structure_generators(const FilteredPhiNModule& d) {
  std::vector<Mat> g{d.base.phi, d.base.n};
  if (d.galois())
    for (const auto& r : d.galois()->rep) g.push_back(r);
  return g;
}

// ---------------------------------------------------------------------------
// Weak admissibility.

enum class AdmStatus { Admissible, NotAdmissible, ProbablyAdmissible };

struct AdmissibilityVerdict {
  AdmStatus status = AdmStatus::Admissible;
  long t_N = 0, t_H = 0;                // of the module
  std::optional<Subspace> witness;      // destabilizing subobject of D_0
  long witness_t_N = 0, witness_t_H = 0;
  std::size_t subobjects_checked = 0;
  std::size_t trials = 0;               // probabilistic mode only
  std::uint64_t seed = 0;

  bool admissible() const { return status != AdmStatus::NotAdmissible; }
  std::string str() const {
    switch (status) {
      case AdmStatus::Admissible: return "Admissible";
      case AdmStatus::ProbablyAdmissible:
        return "ProbablyAdmissible: " + std::to_string(trials) + " random trials, seed " + std::to_string(seed);
      case AdmStatus::NotAdmissible: {
        std::string rel = witness_t_N < witness_t_H ? " < " : (witness_t_N > witness_t_H ? " > " : " = ");
        return "NotAdmissible: t_N=" + std::to_string(witness_t_N) + rel + "t_H=" + std::to_string(witness_t_H);
      }
    }
    return {};
  }
};

inline AdmissibilityVerdict is_weakly_admissible(const FilteredPhiNModule& d, std::uint64_t seed = 0,
                                                 std::size_t trials = 1000) {
  require_valid(d);
  AdmissibilityVerdict v;
  v.t_N = t_N(d);
  v.t_H = t_H(d);
  const std::size_t n = d.dim();
  auto reject = [&](const Subspace& w, long tn, long th) {
    v.status = AdmStatus::NotAdmissible;
    v.witness = w;
    v.witness_t_N = tn;
    v.witness_t_H = th;
  };
  if (v.t_N != v.t_H) {
    reject(Subspace::whole(n), v.t_N, v.t_H);
    return v;
  }
  // true if w destabilizes
  auto test = [&](const Subspace& w) {
    if (w.is_zero() || w.is_whole()) return false;
    ++v.subobjects_checked;
    FilteredPhiNModule s = submodule(d, w.basis());
    long tn = t_N(s), th = t_H(s);
    if (tn < th) {
      reject(w, tn, th);
      return true;
    }
    return false;
  };
  std::vector<Mat> gens = structure_generators(d);
  InvariantLattice lat = invariant_subspaces(gens, n);
  if (auto* fin = std::get_if<FiniteLattice>(&lat)) {
    for (const auto& w : fin->subspaces)
      if (test(w)) return v;
    return v;
  }
  // Infinite lattice: extremal candidates first, then random cyclic submodules.
  Mat ci = inverse_or_throw(d.comparison, "comparison");
  std::vector<Subspace> pools{Subspace::whole(n)};
  for (const auto& [i, f] : d.fil.jumps()) {
    Subspace back = image(ci, f);
    pools.push_back(back);
    if (test(stable_core(gens, back)) || test(stable_closure(gens, back))) return v;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (std::size_t t = 0; t < trials; ++t) {
    const Subspace& pool = pools[rng() % pools.size()];
    if (pool.is_zero()) continue;
    std::size_t nvec = 1 + rng() % 2;
    Subspace seed_space = Subspace::zero(n);
    for (std::size_t k = 0; k < nvec; ++k) {
      Vec x(n);
      for (std::size_t b = 0; b < pool.dim(); ++b) {
        Rat c = coef(rng);
        if (c == 0) continue;
        Vec pb = pool.vector(b);
        for (std::size_t e = 0; e < n; ++e) x[e] += c * pb[e];
      }
      seed_space = sum(seed_space, Subspace::span(n, {x}));
    }
    if (test(stable_closure(gens, seed_space))) {
      v.trials = t + 1;
      v.seed = seed;
      return v;
    }
  }
  v.status = AdmStatus::ProbablyAdmissible;
  v.trials = trials;
  v.seed = seed;
  return v;
}

// ---------------------------------------------------------------------------
// Complexes of filtered modules. Differentials are given on D_0; on D_K they
// act by conjugation with the comparison isomorphisms.

struct ModuleComplex {
  int min_deg = 0;
  std::vector<FilteredPhiNModule> terms;
  std::vector<Mat> d;

  static ModuleComplex single(const FilteredPhiNModule& m, int deg = 0) { return ModuleComplex{deg, {m}, {}}; }

  bool empty() const { return terms.empty(); }
  int max_deg() const { return min_deg + static_cast<int>(terms.size()) - 1; }
  long p() const { return terms.empty() ? 0 : terms.front().p(); }
  const FilteredPhiNModule* term(int n) const {
    if (n < min_deg || n > max_deg()) return nullptr;
    return &terms[n - min_deg];
  }
  std::size_t dim(int n) const { return term(n) ? term(n)->dim() : 0; }
  Mat comparison(int n) const { return term(n) ? term(n)->comparison : Mat(); }

  PhiNComplex phin() const {
    PhiNComplex c{p(), min_deg, {}, d};
    for (const auto& t : terms) c.terms.push_back(t.base);
    return c;
  }
  ChainComplex underlying() const { return phin().underlying(); }
  Mat diff_K(int n) const {
    ChainComplex u = underlying();
    Mat dn = u.diff(n);
    if (dn.empty()) return dn;
    return comparison(n + 1) * dn * inverse_or_throw(comparison(n), "comparison");
  }
  FilteredComplex filtered() const {
    FilteredComplex f;
    f.min_deg = min_deg;
    for (const auto& t : terms) f.terms.push_back(t.fil);
    for (int n = min_deg; n < max_deg(); ++n) f.d.push_back(diff_K(n));
    return f;
  }

  void check() const {
    for (const auto& t : terms) {
      require_valid(t);
      if (t.p() != p()) throw ModuleError("prime mismatch inside complex");
    }
    phin().check();
    filtered().check();
  }
};

inline ModuleComplex tate_twist(const ModuleComplex& c, int r) {
  ModuleComplex t = c;
  for (auto& m : t.terms) m = tate_twist(m, r);
  return t;
}

// ---------------------------------------------------------------------------
// Hom♭(M, T) = Fib( Hom♯_G(M_0, T_0) ⊕ Hom_filt(M_K, T_K) --f--> Hom(M_K, T_K) ),
// f(x, b) = b − c_T x c_M^{-1}. Degree n coordinates: [Hom♯^n | Hom_filt^n | Hom^{n−1}].

struct FlatComplex {
  SharpComplex sharp;
  HomComplex filt;
  HomComplex full;
  ChainMap f;  // Hom♯ ⊕ Hom_filt -> Hom
  ChainComplex source;
  ChainComplex cx;

  std::size_t filt_offset(int n) const { return sharp.cx.dim(n); }
  std::size_t full_offset(int n) const { return sharp.cx.dim(n) + filt.space(n).dim; }
};

inline HomComplex filtered_hom_complex(const FilteredComplex& a, const FilteredComplex& b) {
  return make_hom_complex(a.underlying(), b.underlying(), {}, {}, [&](int k, int n) -> std::optional<Subspace> {
    return hom_dr(a.term(k), b.term(k + n));
  });
}

inline FlatComplex hom_flat(const ModuleComplex& m, const ModuleComplex& t) {
  if (!m.empty() && !t.empty() && m.p() != t.p()) throw ModuleError("prime mismatch");
  FlatComplex fc;
  fc.sharp = hom_sharp(m.phin(), t.phin());
  FilteredComplex mk = m.filtered(), tk = t.filtered();
  fc.filt = filtered_hom_complex(mk, tk);
  fc.full = make_hom_complex(mk.underlying(), tk.underlying());
  fc.source = direct_sum(fc.sharp.cx, fc.filt.cx);
  const ChainComplex& C = fc.full.cx;
  auto [lo, hi] = degree_span(fc.source, C);
  fc.f = ChainMap::make(lo, hi, [&](int n) {
    Mat out(C.dim(n), fc.source.dim(n));
    const HomSpace& px = fc.sharp.P.space(n);
    if (px.dim && C.dim(n)) {
      Mat conj = hom_operator(px, fc.full.space(n), [&](int k, const Mat& x) {
        return std::map<int, Mat>{{k, -(t.comparison(k + n) * x * inverse_or_throw(m.comparison(k), "comparison"))}};
      });
      out.set_block(0, fc.sharp.slot_offset(n, Slot::X), conj);
    }
    if (fc.filt.space(n).dim && C.dim(n)) {
      Mat inc = hom_operator(fc.filt.space(n), fc.full.space(n),
                             [&](int k, const Mat& x) { return std::map<int, Mat>{{k, x}}; });
      out.set_block(0, fc.sharp.cx.dim(n), inc);
    }
    return out;
  });
  fc.cx = fiber(fc.source, C, fc.f);
  return fc;
}

inline FlatComplex hom_flat(const FilteredPhiNModule& m, const FilteredPhiNModule& t) {
  return hom_flat(ModuleComplex::single(m), ModuleComplex::single(t));
}

inline std::vector<std::size_t> h_st(const FilteredPhiNModule& d) {
  return ext_dims(hom_flat(FilteredPhiNModule::unit(d.p()), d).cx).range(0, 2);
}

inline std::size_t h_st(const FilteredPhiNModule& d, int i) {
  return ext_dims(hom_flat(FilteredPhiNModule::unit(d.p()), d).cx).at(i);
}

// ---------------------------------------------------------------------------
// Extension killing a K-side cochain.
//
// Given u ∈ Hom^j(M_K, T_K), E^n = T^n ⊕ M^{n−j−1} ⊕ M^{n−j} with
// d(t, m', m) = (d t, d m' − m, −d m), coordinatewise (φ, N, ρ), and
// F^s E_K^n = F^s T_K^n ⊕ {(u x, 0, x) : x ∈ F^s M_K^{n−j}} ⊕ d{(u x, 0, x) : x ∈ F^s M_K^{n−j−1}}.

struct Extension {
  ModuleComplex e;
  ChainMap inclusion;              // T -> E
  ChainMap projection;             // E -> Cone(id_M)[−j−1]
  ChainComplex quotient;           // Cone(id_M)[−j−1], plain
  std::map<int, Mat> xi_x, xi_dr;  // ξ ∈ Hom♯^j(M_0, E_0) ⊕ Hom_filt^j(M_K, E_K)
  std::map<int, Mat> u_in_e;       // ι_T ∘ u
  Vec xi;                          // ξ as a degree-j cochain of Hom♭(M, E) (source part)
  Vec f_xi;                        // f(ξ) in Hom^j(M_K, E_K)
  Vec expected;                    // (u, 0, 0) in the same coordinates
};

inline Extension build_extension(const std::map<int, Mat>& u, int j, const ModuleComplex& m, const ModuleComplex& t) {
  m.check();
  t.check();
  if (!m.empty() && !t.empty() && m.p() != t.p()) throw ModuleError("prime mismatch");
  for (const auto& [k, uk] : u)
    if (uk.rows() != t.dim(k + j) || uk.cols() != m.dim(k)) throw ModuleError("malformed u: block shape at degree " + std::to_string(k));
  const long p = m.empty() ? t.p() : m.p();
  auto U = [&](int k) {
    auto it = u.find(k);
    return it == u.end() ? Mat(t.dim(k + j), m.dim(k)) : it->second;
  };
  ChainComplex mu = m.underlying(), tu = t.underlying();
  int lo = std::min(t.empty() ? m.min_deg + j : t.min_deg, m.empty() ? t.min_deg : m.min_deg + j);
  int hi = std::max(t.empty() ? m.max_deg() + j + 1 : t.max_deg(), m.empty() ? t.max_deg() : m.max_deg() + j + 1);
  Extension ex;
  ex.e.min_deg = lo;
  FilteredComplex mk = m.filtered(), tk = t.filtered();
  for (int n = lo; n <= hi; ++n) {
    const int i = n - j;
    const std::size_t dt = t.dim(n), dm1 = m.dim(i - 1), dm = m.dim(i), tot = dt + dm1 + dm;
    PhiNModule b;
    b.p = p;
    auto blk3 = [&](const Mat& x, const Mat& y, const Mat& z) {
      Mat r(tot, tot);
      if (dt) r.set_block(0, 0, x);
      if (dm1) r.set_block(dt, dt, y);
      if (dm) r.set_block(dt + dm1, dt + dm1, z);
      return r;
    };
    auto part = [](const FilteredPhiNModule* x, auto get) { return x ? get(*x) : Mat(); };
    auto phi = [](const FilteredPhiNModule& x) { return x.base.phi; };
    auto nop = [](const FilteredPhiNModule& x) { return x.base.n; };
    auto cmp = [](const FilteredPhiNModule& x) { return x.comparison; };
    b.phi = blk3(part(t.term(n), phi), part(m.term(i - 1), phi), part(m.term(i), phi));
    b.n = blk3(part(t.term(n), nop), part(m.term(i - 1), nop), part(m.term(i), nop));
    const FilteredPhiNModule* grp = nullptr;
    for (const auto* x : {t.term(n), m.term(i - 1), m.term(i)})
      if (x && x->galois()) grp = x;
    if (grp) {
      GroupData g{grp->galois()->order, grp->galois()->table, {}};
      for (std::size_t e = 0; e < g.order; ++e) {
        auto rp = [&](const FilteredPhiNModule* x) {
          if (!x) return Mat();
          return x->galois() ? x->galois()->rep[e] : Mat::identity(x->dim());
        };
        g.rep.push_back(blk3(rp(t.term(n)), rp(m.term(i - 1)), rp(m.term(i))));
      }
      b.galois = g;
    }
    Mat comp = blk3(part(t.term(n), cmp), part(m.term(i - 1), cmp), part(m.term(i), cmp));
    // filtration on the K side
    std::set<int> keys;
    for (const auto* x : {t.term(n), m.term(i - 1), m.term(i)})
      if (x)
        for (int s : x->fil.keys()) keys.insert(s);
    std::map<int, Subspace> steps;
    for (int s : keys) {
      std::vector<Vec> vs;
      Subspace ft = tk.term(n).F(s);
      for (std::size_t k = 0; k < ft.dim(); ++k) {
        Vec v(tot);
        Vec x = ft.vector(k);
        std::copy(x.begin(), x.end(), v.begin());
        vs.push_back(v);
      }
      if (dm) {
        Subspace fm = mk.term(i).F(s);
        Mat ui = U(i);
        for (std::size_t k = 0; k < fm.dim(); ++k) {
          Vec x = fm.vector(k), v(tot);
          Vec ux = dt ? ui * x : Vec{};
          std::copy(ux.begin(), ux.end(), v.begin());
          std::copy(x.begin(), x.end(), v.begin() + static_cast<long>(dt + dm1));
          vs.push_back(v);
        }
      }
      if (dm1) {
        Subspace fm = mk.term(i - 1).F(s);
        Mat ui = U(i - 1);
        Mat dT = tk.diff(n - 1), dM = mk.diff(i - 1);
        for (std::size_t k = 0; k < fm.dim(); ++k) {
          Vec x = fm.vector(k), v(tot);
          Vec dux = dt ? dT * (ui * x) : Vec{};
          Vec dx = dm ? dM * x : Vec{};
          std::copy(dux.begin(), dux.end(), v.begin());
          for (std::size_t e = 0; e < dm1; ++e) v[dt + e] = -x[e];
          for (std::size_t e = 0; e < dm; ++e) v[dt + dm1 + e] = -dx[e];
          vs.push_back(v);
        }
      }
      steps.emplace(s, Subspace::span(tot, vs));
    }
    ex.e.terms.push_back(FilteredPhiNModule{b, FilteredSpace::from_steps(tot, steps), comp});
  }
  for (int n = lo; n < hi; ++n) {
    const int i = n - j;
    const std::size_t dt0 = t.dim(n), dm10 = m.dim(i - 1), dm0 = m.dim(i);
    const std::size_t dt1 = t.dim(n + 1), dm11 = m.dim(i), dm1 = m.dim(i + 1);
    Mat dd(dt1 + dm11 + dm1, dt0 + dm10 + dm0);
    dd.set_block(0, 0, tu.diff(n));
    dd.set_block(dt1, dt0, mu.diff(i - 1));
    dd.add_block(dt1, dt0 + dm10, Mat::identity(dm0), -1);
    dd.set_block(dt1 + dm11, dt0 + dm10, -mu.diff(i));
    ex.e.d.push_back(dd);
  }
  ex.e.check();
  ChainComplex eu = ex.e.underlying();
  ex.inclusion = ChainMap::make(lo, hi, [&](int n) {
    Mat r(eu.dim(n), t.dim(n));
    r.set_block(0, 0, Mat::identity(t.dim(n)));
    return r;
  });
  ex.quotient = ChainComplex::make(
      lo, hi, [&](int n) { return m.dim(n - j - 1) + m.dim(n - j); },
      [&](int n) {
        const int i = n - j;
        Mat dd(m.dim(i) + m.dim(i + 1), m.dim(i - 1) + m.dim(i));
        dd.set_block(0, 0, mu.diff(i - 1));
        dd.add_block(0, m.dim(i - 1), Mat::identity(m.dim(i)), -1);
        dd.set_block(m.dim(i), m.dim(i - 1), -mu.diff(i));
        return dd;
      });
  ex.projection = ChainMap::make(lo, hi, [&](int n) {
    Mat r(ex.quotient.dim(n), eu.dim(n));
    r.set_block(0, t.dim(n), Mat::identity(ex.quotient.dim(n)));
    return r;
  });
  // ξ and f(ξ)
  for (int i = m.min_deg; i <= m.max_deg(); ++i) {
    const int n = i + j;
    const std::size_t dt = t.dim(n), dm1 = m.dim(i - 1), dm = m.dim(i);
    if (dm == 0) continue;
    Mat x(dt + dm1 + dm, dm), y(dt + dm1 + dm, dm), ui(dt + dm1 + dm, dm);
    x.set_block(dt + dm1, 0, Mat::identity(dm));
    y.set_block(dt + dm1, 0, Mat::identity(dm));
    if (dt) {
      y.set_block(0, 0, U(i));
      ui.set_block(0, 0, U(i));
    }
    ex.xi_x[i] = x;
    ex.xi_dr[i] = y;
    ex.u_in_e[i] = ui;
  }
  FlatComplex fl = hom_flat(m, ex.e);
  ex.xi = Vec(fl.source.dim(j));
  fl.sharp.add_slot(ex.xi, j, Slot::X, fl.sharp.P.space(j).from_blocks(ex.xi_x));
  Vec dr = fl.filt.space(j).from_blocks(ex.xi_dr);
  for (std::size_t k = 0; k < dr.size(); ++k) ex.xi[fl.sharp.cx.dim(j) + k] = dr[k];
  ex.f_xi = fl.f.at(j, fl.source, fl.full.cx) * ex.xi;
  ex.expected = fl.full.space(j).from_blocks(ex.u_in_e);
  return ex;
}

// ---------------------------------------------------------------------------

struct KernelCokernel {
  FilteredPhiNModule ker, coker;
  Mat ker_basis;  // in D_0 of the source
  bool strict = true;
  StrictnessReport report;
};

inline bool is_morphism(const FilteredPhiNModule& a, const FilteredPhiNModule& b, const Mat& f) {
  if (f.rows() != b.dim() || f.cols() != a.dim()) return false;
  if (!(b.base.phi * f == f * a.base.phi) || !(b.base.n * f == f * a.base.n)) return false;
  auto ra = a.base.reps(), rb = b.base.reps();
  for (std::size_t g = 0; g < std::max(ra.size(), rb.size()); ++g) {
    Mat x = ra.empty() ? Mat::identity(a.dim()) : ra[g];
    Mat y = rb.empty() ? Mat::identity(b.dim()) : rb[g];
    if (!(f * x == y * f)) return false;
  }
  Mat fk = b.comparison * f * inverse_or_throw(a.comparison, "comparison");
  return preserves_filtration(a.fil, b.fil, fk);
}

inline KernelCokernel kernel_cokernel(const FilteredPhiNModule& a, const FilteredPhiNModule& b, const Mat& f) {
  if (!is_morphism(a, b, f)) throw ModuleError("not a morphism of filtered (φ,N,G)-modules");
  KernelCokernel kc;
  kc.ker_basis = kernel_basis(f);
  kc.ker = submodule(a, kc.ker_basis);
  kc.coker = quotient_module(b, image(f));
  Mat fk = b.comparison * f * inverse_or_throw(a.comparison, "comparison");
  kc.report = is_strict({a.fil, b.fil, fk});
  kc.strict = kc.report.strict;
  return kc;
}

}  // namespace hodgeforge
