#pragma once

// p-adic Hodge complexes: triples (M_0, M_K, a) with a: M_0 -> M_K a
// quasi-isomorphism of the underlying complexes.

#include "hodgeforge/dfmod.hpp"

namespace hodgeforge {

struct PadicHodgeComplex {
  PhiNComplex m0;
  FilteredComplex mk;
  ChainMap a;  // m0.underlying() -> mk.underlying()

  long p() const { return m0.p; }
  ChainComplex zero_side() const { return m0.underlying(); }
  ChainComplex dr_side() const { return mk.underlying(); }
  Mat a_at(int n) const { return a.at(n, mk.term(n).dim(), m0.dim(n)); }
  std::pair<int, int> span() const { return degree_span(zero_side(), dr_side()); }
};

struct PHReport {
  bool ok = true;
  std::string violation;
  std::optional<int> degree;
};

inline PHReport validate_pH(const PadicHodgeComplex& m) {
  PHReport r;
  auto fail = [&](std::string what, std::optional<int> n = std::nullopt) {
    r.ok = false;
    r.violation = std::move(what);
    r.degree = n;
    return r;
  };
  try {
    m.m0.check();
    m.mk.check();
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  ChainComplex x = m.zero_side(), y = m.dr_side();
  auto [lo, hi] = degree_span(x, y);
  for (int n = lo; n <= hi; ++n) {
    Mat an;
    try {
      an = m.a.at(n, x, y);
    } catch (const std::exception& e) {
      return fail(e.what(), n);
    }
    if (!(y.diff(n) * an == m.a.at(n + 1, x, y) * x.diff(n))) return fail("a is not a chain map", n);
  }
  CohomologyDims hx = ext_dims(x), hy = ext_dims(y);
  for (int n = lo; n <= hi; ++n) {
    if (hx.at(n) != hy.at(n)) return fail("a is not a quasi-isomorphism", n);
    if (hx.at(n) == 0) continue;
    if (rank(induced_on_cohomology(m.a, x, y, n)) != hx.at(n)) return fail("a is not a quasi-isomorphism", n);
  }
  return r;
}

inline void require_valid(const PadicHodgeComplex& m) {
  PHReport r = validate_pH(m);
  if (!r.ok) {
    std::string where = r.degree ? " in degree " + std::to_string(*r.degree) : "";
    throw ModuleError(r.violation + where);
  }
}

inline PadicHodgeComplex theta(const ModuleComplex& m) {
  PadicHodgeComplex h{m.phin(), m.filtered(), {}};
  h.a = ChainMap::make(m.min_deg, m.max_deg(), [&](int n) { return m.comparison(n); });
  return h;
}
inline PadicHodgeComplex theta(const FilteredPhiNModule& d) { return theta(ModuleComplex::single(d)); }

inline PadicHodgeComplex unit_pH(long p) { return theta(FilteredPhiNModule::unit(p)); }

// ---------------------------------------------------------------------------
// The Hom complex of p-adic Hodge complexes.
//
// Hom^n(M, N) = Hom♯^n(M_0, N_0) ⊕ Hom_filt^n(M_K, N_K) ⊕ Hom^{n−1}(M_0, N_K),
// d(a, b, c) = (d a, −D b, −D c + a_N F_0(a) − (−1)^n b a_M),
// where F_0 reads off the x-slot of a Hom♯ cochain.

struct PHHomComplex {
  SharpComplex A;
  HomComplex B;
  HomComplex C;
  ChainComplex source;  // A ⊕ (B, −D)
  ChainMap f;           // source -> C
  ChainComplex cx;

  std::size_t b_offset(int n) const { return A.cx.dim(n); }
  std::size_t c_offset(int n) const { return A.cx.dim(n) + B.space(n).dim; }
};

struct PHHomElement {
  int degree = 0;
  Vec a, b, c;
};

inline PHHomElement unpack(const PHHomComplex& h, const Vec& v, int n) {
  auto cut = [&](std::size_t off, std::size_t len) {
    return Vec(v.begin() + static_cast<long>(off), v.begin() + static_cast<long>(off + len));
  };
  if (v.size() != h.cx.dim(n)) throw ModuleError("pH cochain has wrong length for degree " + std::to_string(n));
  return PHHomElement{n, cut(0, h.A.cx.dim(n)), cut(h.b_offset(n), h.B.space(n).dim),
                      cut(h.c_offset(n), h.C.space(n - 1).dim)};
}

inline Vec pack(const PHHomComplex& h, const PHHomElement& e) {
  const int n = e.degree;
  if (e.a.size() != h.A.cx.dim(n) || e.b.size() != h.B.space(n).dim || e.c.size() != h.C.space(n - 1).dim)
    throw ModuleError("pH element components have inconsistent sizes");
  Vec v;
  v.reserve(h.cx.dim(n));
  v.insert(v.end(), e.a.begin(), e.a.end());
  v.insert(v.end(), e.b.begin(), e.b.end());
  v.insert(v.end(), e.c.begin(), e.c.end());
  return v;
}

inline PHHomComplex hom_complex_pH(const PadicHodgeComplex& m, const PadicHodgeComplex& n) {
  if (m.p() != n.p() && !m.m0.empty() && !n.m0.empty()) throw ModuleError("prime mismatch");
  PHHomComplex h;
  h.A = hom_sharp(m.m0, n.m0);
  h.B = filtered_hom_complex(m.mk, n.mk);
  h.C = make_hom_complex(m.zero_side(), n.dr_side());
  h.source = direct_sum(h.A.cx, negate_differential(h.B.cx));
  auto [lo, hi] = degree_span(h.source, h.C.cx);
  h.f = ChainMap::make(lo, hi, [&](int d) {
    const HomSpace& cs = h.C.space(d);
    Mat out(cs.dim, h.source.dim(d));
    if (cs.dim == 0) return out;
    const HomSpace& xs = h.A.P.space(d);
    if (xs.dim)
      out.set_block(0, h.A.slot_offset(d, Slot::X), hom_operator(xs, cs, [&](int k, const Mat& x) {
                      return std::map<int, Mat>{{k, n.a_at(k + d) * x}};
                    }));
    const Rat sgn = (d % 2 == 0) ? -1 : 1;
    if (h.B.space(d).dim)
      out.set_block(0, h.b_offset(d), hom_operator(h.B.space(d), cs, [&](int k, const Mat& x) {
                      return std::map<int, Mat>{{k, sgn * (x * m.a_at(k))}};
                    }));
    return out;
  });
  h.cx = fiber(h.source, h.C.cx, h.f);
  return h;
}

// (a', b', c') ∘ (a, b, c) = (a' a, b' b, c' F_0(a) + b' c).
inline Vec compose_pH(const PHHomComplex& nl, const Vec& g, int i, const PHHomComplex& mn, const Vec& f, int j,
                      const PHHomComplex& ml) {
  PHHomElement eg = unpack(nl, g, i), ef = unpack(mn, f, j);
  PHHomElement out{i + j, {}, {}, {}};
  out.a = compose_sharp(nl.A, eg.a, i, mn.A, ef.a, j, ml.A);
  out.b = compose_hom(nl.B.space(i), eg.b, mn.B.space(j), ef.b, ml.B.space(i + j));
  const HomSpace& cs = ml.C.space(i + j - 1);
  out.c = compose_hom(nl.C.space(i - 1), eg.c, mn.A.P.space(j), mn.A.slot(ef.a, j, Slot::X), cs);
  Vec bc = compose_hom(nl.B.space(i), eg.b, mn.C.space(j - 1), ef.c, cs);
  for (std::size_t k = 0; k < bc.size(); ++k) out.c[k] += bc[k];
  return pack(ml, out);
}

// Degree-0 element (a, b, 0) with x-slot a and filtered part b given blockwise.
inline Vec ph_element(const PHHomComplex& h, const std::map<int, Mat>& a, const std::map<int, Mat>& b,
                      const std::map<int, Mat>& c = {}) {
  PHHomElement e{0, h.A.zero(0), h.B.space(0).from_blocks(b), h.C.space(-1).from_blocks(c)};
  h.A.add_slot(e.a, 0, Slot::X, h.A.P.space(0).from_blocks(a));
  return pack(h, e);
}

inline PHHomElement identity_pH(const PHHomComplex& h, const PadicHodgeComplex& m) {
  std::map<int, Mat> id0, idk;
  for (int k = m.m0.min_deg; k <= m.m0.max_deg(); ++k) id0[k] = Mat::identity(m.m0.dim(k));
  for (int k = m.mk.min_deg; k <= m.mk.max_deg(); ++k) idk[k] = Mat::identity(m.mk.term(k).dim());
  return unpack(h, ph_element(h, id0, idk), 0);
}

inline bool is_closed(const PHHomComplex& h, const Vec& v, int n) { return is_zero(h.cx.diff(n) * v); }

// A closed degree-0 element is a quasi-isomorphism iff its two components are.
inline bool is_quasi_iso_pH(const PHHomComplex& h, const Vec& v, const PadicHodgeComplex& m,
                            const PadicHodgeComplex& n) {
  if (!is_closed(h, v, 0)) return false;
  PHHomElement e = unpack(h, v, 0);
  auto xa = h.A.P.space(0).to_blocks(h.A.slot(e.a, 0, Slot::X));
  auto xb = h.B.space(0).to_blocks(e.b);
  ChainComplex m0 = m.zero_side(), n0 = n.zero_side(), mk = m.dr_side(), nk = n.dr_side();
  auto [lo0, hi0] = degree_span(m0, n0);
  ChainMap f0 = ChainMap::make(lo0, hi0, [&](int k) {
    auto it = xa.find(k);
    return it == xa.end() ? Mat(n0.dim(k), m0.dim(k)) : it->second;
  });
  auto [lok, hik] = degree_span(mk, nk);
  ChainMap fk = ChainMap::make(lok, hik, [&](int k) {
    auto it = xb.find(k);
    return it == xb.end() ? Mat(nk.dim(k), mk.dim(k)) : it->second;
  });
  return is_quasi_iso(f0, m0, n0) && is_quasi_iso(fk, mk, nk);
}

// ---------------------------------------------------------------------------
// Cohomology objects and admissibility.

inline FilteredPhiNModule cohomology_module(const PadicHodgeComplex& m, int n) {
  ChainComplex x = m.zero_side();
  CohomologyAt h0 = cohomology_at(x, n);
  FilteredCohomology hk = cohomology_object(m.mk, n);
  const PhiNModule* t = m.m0.term(n);
  FilteredPhiNModule out;
  out.base.p = m.p();
  if (h0.dim() == 0) {
    out.base.phi = out.base.n = Mat(0, 0);
    out.fil = FilteredSpace::trivial(0);
    out.comparison = Mat(0, 0);
    return out;
  }
  out.base.phi = h0.classify(t->phi * h0.rep);
  out.base.n = h0.classify(t->n * h0.rep);
  if (t->galois) {
    out.base.galois = GroupData{t->galois->order, t->galois->table, {}};
    for (const auto& r : t->galois->rep) out.base.galois->rep.push_back(h0.classify(r * h0.rep));
  } else if (m.m0.has_group()) {
    for (const auto& term : m.m0.terms)
      if (term.galois)
        out.base.galois = GroupData{term.galois->order, term.galois->table,
                                    std::vector<Mat>(term.galois->order, Mat::identity(h0.dim()))};
  }
  out.fil = hk.space;
  out.comparison = hk.data.classify(m.a_at(n) * h0.rep);
  return out;
}

struct PHAdmissibility {
  bool admissible = true;
  std::map<int, AdmissibilityVerdict> verdicts;  // per nonzero cohomology degree
  std::map<int, FilteredPhiNModule> cohomology;
};

inline PHAdmissibility is_admissible_pH(const PadicHodgeComplex& m, std::uint64_t seed = 0) {
  require_valid(m);
  int bad = 0;
  StrictnessReport s = first_non_strict(m.mk, &bad);
  if (!s.strict) throw ModuleError("de Rham side is not strict: d^" + std::to_string(bad) + " fails at F^" + std::to_string(s.index));
  PHAdmissibility r;
  auto [lo, hi] = m.span();
  for (int n = lo; n <= hi; ++n) {
    FilteredPhiNModule h = cohomology_module(m, n);
    if (h.dim() == 0) continue;
    AdmissibilityVerdict v = is_weakly_admissible(h, seed);
    r.admissible = r.admissible && v.admissible();
    r.verdicts.emplace(n, v);
    r.cohomology.emplace(n, h);
  }
  return r;
}

// ---------------------------------------------------------------------------
// θ^{-1}.

namespace detail {

// A chain isomorphism X -> Y inducing the same map on cohomology as the
// quasi-isomorphism g. Requires dim X^n = dim Y^n for all n.
inline ChainMap chain_iso_like(const ChainMap& g, const ChainComplex& x, const ChainComplex& y) {
  auto [lo, hi] = degree_span(x, y);
  std::map<int, Mat> out;
  for (int n = lo; n <= hi; ++n) {
    if (x.dim(n) != y.dim(n)) throw ComplexError("chain_iso_like: dimension mismatch in degree " + std::to_string(n));
    Mat cxn = quotient_section(kernel(x.diff(n)));
    Mat cyn = quotient_section(kernel(y.diff(n)));
    if (cxn.cols() != cyn.cols()) throw ComplexError("chain_iso_like: rank mismatch in degree " + std::to_string(n));
    Mat cxp = x.dim(n - 1) ? quotient_section(kernel(x.diff(n - 1))) : Mat(0, 0);
    Mat cyp = y.dim(n - 1) ? quotient_section(kernel(y.diff(n - 1))) : Mat(0, 0);
    Mat rep = cohomology_at(x, n).rep;
    std::vector<Mat> src, tgt;
    if (cxp.cols()) {
      src.push_back(x.diff(n - 1) * cxp);
      tgt.push_back(y.diff(n - 1) * cyp);
    }
    if (rep.cols()) {
      src.push_back(rep);
      tgt.push_back(g.at(n, x, y) * rep);
    }
    if (cxn.cols()) {
      src.push_back(cxn);
      tgt.push_back(cyn);
    }
    const std::size_t d = x.dim(n);
    if (d == 0) {
      out[n] = Mat(0, 0);
      continue;
    }
    Mat s = hstack(src, d), t = hstack(tgt, d);
    out[n] = t * inverse_or_throw(s, "chain_iso_like basis");
  }
  return ChainMap::make(lo, hi, [&](int n) { return out.at(n); });
}

inline PhiNModule plain_module(long p, std::size_t dim, const std::optional<GroupData>& like) {
  PhiNModule m{p, Mat::identity(dim), Mat(dim, dim), std::nullopt};
  if (like) {
    m.galois = GroupData{like->order, like->table, std::vector<Mat>(like->order, Mat::identity(dim))};
  }
  return m;
}

}  // namespace detail

struct ThetaInverse {
  ModuleComplex complex;
  bool padded = false;
  // Degree-0 closed element of Hom(θ(complex), input) whose components are quasi-isomorphisms.
  Vec witness;
};

inline ThetaInverse theta_inv(const PadicHodgeComplex& m, std::uint64_t seed = 0) {
  PHAdmissibility adm = is_admissible_pH(m, seed);
  if (!adm.admissible) {
    for (const auto& [n, v] : adm.verdicts)
      if (!v.admissible()) throw ModuleError("H^" + std::to_string(n) + " is not admissible: " + v.str());
  }
  ChainComplex m0 = m.zero_side(), mk = m.dr_side();
  auto [lo, hi] = degree_span(m0, mk);
  bool invertible = true;
  for (int n = lo; n <= hi; ++n)
    if (m0.dim(n) != mk.dim(n) || (m0.dim(n) && !inverse(m.a_at(n)))) invertible = false;
  std::optional<GroupData> grp;
  for (const auto& t : m.m0.terms)
    if (t.galois) grp = t.galois;

  ThetaInverse out;
  ModuleComplex& e = out.complex;
  std::map<int, Mat> proj0, projk;
  ChainComplex e0;  // underlying complex of E_0
  if (invertible) {
    e.min_deg = lo;
    for (int n = lo; n <= hi; ++n) {
      PhiNModule b = m.m0.term(n) ? *m.m0.term(n) : detail::plain_module(m.p(), 0, grp);
      if (grp && !b.galois) b.galois = detail::plain_module(m.p(), b.dim(), grp).galois;
      e.terms.push_back(FilteredPhiNModule{b, m.mk.term(n), m.a_at(n)});
      proj0[n] = Mat::identity(m0.dim(n));
      projk[n] = Mat::identity(mk.dim(n));
    }
    for (int n = lo; n < hi; ++n) e.d.push_back(m0.diff(n));
  } else {
    out.padded = true;
    ChainComplex padx = fiber(mk, mk, identity_map(mk));  // contractible
    ChainComplex pady = fiber(m0, mk, m.a);               // acyclic
    ChainComplex x = direct_sum(m0, padx), y = direct_sum(mk, pady);
    auto [xlo, xhi] = degree_span(x, y);
    ChainMap g = ChainMap::make(xlo, xhi, [&](int n) {
      Mat r(y.dim(n), x.dim(n));
      if (m0.dim(n) && mk.dim(n)) r.set_block(0, 0, m.a_at(n));
      return r;
    });
    ChainMap phi = detail::chain_iso_like(g, x, y);
    e.min_deg = xlo;
    for (int n = xlo; n <= xhi; ++n) {
      const std::size_t d0 = m0.dim(n), pad = padx.dim(n);
      PhiNModule b = m.m0.term(n) ? *m.m0.term(n) : detail::plain_module(m.p(), 0, grp);
      if (grp && !b.galois) b.galois = detail::plain_module(m.p(), d0, grp).galois;
      b = direct_sum(b, detail::plain_module(m.p(), pad, grp));
      FilteredSpace fil = direct_sum(m.mk.term(n), FilteredSpace::trivial(pady.dim(n)));
      e.terms.push_back(FilteredPhiNModule{b, fil, phi.at(n, x, y)});
      Mat p0(d0, x.dim(n)), pk(mk.dim(n), y.dim(n));
      if (d0) p0.set_block(0, 0, Mat::identity(d0));
      if (mk.dim(n)) pk.set_block(0, 0, Mat::identity(mk.dim(n)));
      proj0[n] = p0;
      projk[n] = pk;
    }
    for (int n = xlo; n < xhi; ++n) e.d.push_back(x.diff(n));
  }
  e.check();
  // witness (π_0, π_K, c) with D c = a π_0 − π_K a_E
  PadicHodgeComplex te = theta(e);
  PHHomComplex h = hom_complex_pH(te, m);
  std::map<int, Mat> target;
  for (int n = e.min_deg; n <= e.max_deg(); ++n) {
    Mat lhs = m.a_at(n) * proj0[n] - projk[n] * e.comparison(n);
    if (lhs.rows() && lhs.cols()) target[n] = lhs;
  }
  const HomSpace& c0 = h.C.space(0);
  Vec rhs = c0.from_blocks(target);
  Vec c = Vec(h.C.space(-1).dim);
  if (!is_zero(rhs)) {
    auto sol = solve(h.C.cx.diff(-1), rhs);
    if (!sol) throw ModuleError("theta_inv: comparison maps are not homotopic");
    c = *sol;
  }
  PHHomElement w = unpack(h, ph_element(h, proj0, projk), 0);
  w.c = c;
  out.witness = pack(h, w);
  return out;
}

// ---------------------------------------------------------------------------
// Truncation.

inline PadicHodgeComplex truncate_pH(const PadicHodgeComplex& m, int n, TruncMode mode) {
  PadicHodgeComplex out;
  const PhiNComplex& c = m.m0;
  out.m0.p = c.p;
  out.mk = truncate(m.mk, mode, n);
  ChainComplex x = m.zero_side(), y = m.dr_side();
  if (c.empty()) return out;
  if (mode == TruncMode::LE) {
    if (n < c.min_deg) return out;
    if (n >= c.max_deg()) {
      out.m0 = c;
      out.a = m.a;
      return out;
    }
    out.m0.min_deg = c.min_deg;
    for (int k = c.min_deg; k < n; ++k) out.m0.terms.push_back(*c.term(k));
    Mat z = kernel_basis(x.diff(n));
    FilteredPhiNModule zt = submodule(FilteredPhiNModule{*c.term(n), FilteredSpace::trivial(c.dim(n)), Mat::identity(c.dim(n))}, z);
    out.m0.terms.push_back(zt.base);
    for (int k = c.min_deg; k < n - 1; ++k) out.m0.d.push_back(x.diff(k));
    if (n - 1 >= c.min_deg) out.m0.d.push_back(z.cols() ? coordinates(z, x.diff(n - 1)) : Mat(0, c.dim(n - 1)));
    Mat zk = kernel_basis(y.diff(n));
    out.a = ChainMap::make(c.min_deg, n, [&](int k) {
      if (k < n) return m.a_at(k);
      if (z.cols() == 0 || zk.cols() == 0) return Mat(zk.cols(), z.cols());
      return coordinates(zk, m.a_at(n) * z);
    });
    return out;
  }
  if (n > c.max_deg()) return out;
  if (n <= c.min_deg) {
    out.m0 = c;
    out.a = m.a;
    return out;
  }
  Subspace k0 = kernel(x.diff(n - 1)), kk = kernel(y.diff(n - 1));
  Mat s0 = quotient_section(k0);
  Mat qk = quotient_map(kk);
  FilteredPhiNModule coim = quotient_module(
      FilteredPhiNModule{*c.term(n - 1), FilteredSpace::trivial(c.dim(n - 1)), Mat::identity(c.dim(n - 1))}, k0);
  out.m0.min_deg = n - 1;
  out.m0.terms.push_back(coim.base);
  for (int j = n; j <= c.max_deg(); ++j) out.m0.terms.push_back(*c.term(j));
  out.m0.d.push_back(x.diff(n - 1) * s0);
  for (int j = n; j < c.max_deg(); ++j) out.m0.d.push_back(x.diff(j));
  out.a = ChainMap::make(n - 1, c.max_deg(), [&](int k) {
    if (k >= n) return m.a_at(k);
    return Mat(qk * m.a_at(n - 1) * s0);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Twists and tensor products.

inline PadicHodgeComplex tate_twist_pH(const PadicHodgeComplex& m, int r) {
  PadicHodgeComplex t = m;
  t.m0 = tate_twist(m.m0, r);
  for (auto& f : t.mk.terms) f = f.shifted(r);
  return t;
}

inline PhiNComplex tensor(const PhiNComplex& a, const PhiNComplex& b) {
  if (a.p != b.p) throw ModuleError("prime mismatch");
  ChainComplex au = a.underlying(), bu = b.underlying();
  ChainComplex t = tensor(au, bu);
  TensorLayout lay = tensor_layout(au.min_deg, au.dims, bu.min_deg, bu.dims);
  PhiNComplex out{a.p, t.min_deg, {}, t.d};
  std::optional<GroupData> ga, gb;
  for (const auto& m : a.terms)
    if (m.galois) ga = m.galois;
  for (const auto& m : b.terms)
    if (m.galois) gb = m.galois;
  auto with_group = [&](PhiNModule m, const std::optional<GroupData>& g) {
    if (g && !m.galois) m.galois = detail::plain_module(m.p, m.dim(), g).galois;
    return m;
  };
  for (int n = lay.lo; n <= lay.hi; ++n) {
    PhiNModule sum{a.p, Mat(0, 0), Mat(0, 0), std::nullopt};
    if (ga || gb) sum = detail::plain_module(a.p, 0, ga ? ga : gb);
    for (const auto& blk : lay.blocks.at(n))
      sum = direct_sum(sum, tensor(with_group(*a.term(blk.i), ga), with_group(*b.term(blk.j), gb)));
    out.terms.push_back(sum);
  }
  return out;
}

inline FilteredComplex tensor(const FilteredComplex& a, const FilteredComplex& b) {
  ChainComplex au = a.underlying(), bu = b.underlying();
  ChainComplex t = tensor(au, bu);
  TensorLayout lay = tensor_layout(au.min_deg, au.dims, bu.min_deg, bu.dims);
  FilteredComplex out{t.min_deg, {}, t.d};
  for (int n = lay.lo; n <= lay.hi; ++n) {
    FilteredSpace sum = FilteredSpace::trivial(0);
    for (const auto& blk : lay.blocks.at(n)) sum = direct_sum(sum, tensor(a.term(blk.i), b.term(blk.j)));
    out.terms.push_back(sum);
  }
  return out;
}

inline PadicHodgeComplex tensor_pH(const PadicHodgeComplex& m, const PadicHodgeComplex& n) {
  if (m.p() != n.p()) throw ModuleError("prime mismatch");
  PadicHodgeComplex t;
  t.m0 = tensor(m.m0, n.m0);
  t.mk = tensor(m.mk, n.mk);
  t.a = tensor(m.a, n.a, m.zero_side(), m.dr_side(), n.zero_side(), n.dr_side());
  return t;
}

// ---------------------------------------------------------------------------
// Syntomic cohomology RHom(K(0), M(r)), computed twice.

namespace detail {

// Basis of the G-invariants of each term of a (φ,N,G)-complex.
inline Mat invariant_basis(const PhiNModule* t) {
  if (!t) return Mat(0, 0);
  if (!t->galois) return Mat::identity(t->dim());
  Mat avg(t->dim(), t->dim());
  for (const auto& r : t->galois->rep) avg += r;
  return image(avg).basis();
}

}  // namespace detail

struct SyntomicResult {
  ChainComplex complex;   // fiber of M♯ ⊕ F^r M_K -> M_K
  ChainComplex direct;    // Hom(K(0), M(r))
  CohomologyDims dims;
};

inline SyntomicResult syntomic_cohomology(const PadicHodgeComplex& m, int r) {
  require_valid(m);
  const long p = m.p();
  const PhiNComplex& c = m.m0;
  ChainComplex x = m.zero_side(), y = m.dr_side();
  SyntomicResult res;
  // route (i)
  std::map<int, Mat> inv;
  for (int n = c.min_deg; n <= c.max_deg(); ++n) inv[n] = detail::invariant_basis(c.term(n));
  ChainComplex v = c.empty() ? ChainComplex{} : subcomplex(x, [&](int n) { return inv.at(n); });
  auto on_v = [&](const Mat& op, int n) { return restrict_map(op, inv.at(n), inv.at(n)); };
  auto op_map = [&](const std::function<Mat(int)>& f) {
    return ChainMap::make(v.min_deg, v.max_deg(), [&](int n) { return f(n); });
  };
  const Rat pr = rat_pow(Rat(p), -r), pr1 = rat_pow(Rat(p), 1 - r);
  ChainMap one_minus_phi_r = op_map([&](int n) { return Mat(Mat::identity(v.dim(n)) - pr * on_v(c.phi(n), n)); });
  ChainMap one_minus_phi_r1 = op_map([&](int n) { return Mat(Mat::identity(v.dim(n)) - pr1 * on_v(c.phi(n), n)); });
  ChainMap nv = op_map([&](int n) { return on_v(c.nop(n), n); });
  ChainComplex f1 = fiber(v, v, one_minus_phi_r), f2 = fiber(v, v, one_minus_phi_r1);
  ChainMap nn = ChainMap::make(f1.min_deg, f1.max_deg(),
                               [&](int n) { return direct_sum(nv.at(n, v, v), nv.at(n - 1, v, v)); });
  ChainComplex sharp = fiber(f1, f2, nn);
  std::map<int, Mat> fr;
  for (int n = m.mk.min_deg; n <= m.mk.max_deg(); ++n) fr[n] = m.mk.term(n).F(r).basis();
  ChainComplex filt = m.mk.empty() ? ChainComplex{} : subcomplex(y, [&](int n) {
    auto it = fr.find(n);
    return it == fr.end() ? Mat(y.dim(n), 0) : it->second;
  });
  ChainComplex src = direct_sum(sharp, filt);
  auto [lo, hi] = degree_span(src, y);
  ChainMap can = ChainMap::make(lo, hi, [&](int n) {
    Mat out(y.dim(n), src.dim(n));
    if (y.dim(n) == 0) return out;
    if (v.dim(n)) out.set_block(0, 0, m.a_at(n) * inv.at(n));
    if (filt.dim(n)) out.add_block(0, sharp.dim(n), fr.at(n), -1);
    return out;
  });
  res.complex = fiber(src, y, can);
  // route (ii)
  res.direct = hom_complex_pH(unit_pH(p), tate_twist_pH(m, r)).cx;
  res.dims = ext_dims(res.complex);
  CohomologyDims d2 = ext_dims(res.direct);
  if (!same_cohomology(res.dims, d2)) throw std::logic_error("syntomic_cohomology: the two constructions disagree");
  return res;
}

}  // namespace hodgeforge
