#pragma once

// Spectral sequence of a filtered complex, the descent spectral sequence
// E_2^{i,j} = H^i_st(H^j(D)(r)) => H^{i+j}, degeneration via Lefschetz data,
// and the C_pst complex with the Bloch–Kato exponential.

#include "hodgeforge/phodge.hpp"

namespace hodgeforge {

using Grid = std::map<std::pair<int, int>, std::size_t>;  // (i, j) -> dim

struct SpectralSequenceReport {
  std::map<int, Grid> pages;          // s -> E_s, s ≥ 1
  std::map<int, Grid> differentials;  // s -> rank of d_s leaving (i, j)
  Grid e_infinity;
  CohomologyDims abutment;
  int converged_at = 2;
  int last_page = 1;
  std::vector<std::string> warnings;

  std::size_t dim(int s, int i, int j) const {
    auto pg = pages.find(std::min(s, last_page));
    if (pg == pages.end()) return 0;
    auto it = pg->second.find({i, j});
    return it == pg->second.end() ? 0 : it->second;
  }
  std::size_t rank(int s, int i, int j) const {
    auto pg = differentials.find(s);
    if (pg == differentials.end()) return 0;
    auto it = pg->second.find({i, j});
    return it == pg->second.end() ? 0 : it->second;
  }
  bool degenerates_at(int s) const { return converged_at <= s; }
};

// Decreasing filtration F^i C^n = span of the coordinates with tag ≥ i; the
// differential must not lower tags. Pages are indexed by i (filtration) and
// j = n − i.
inline SpectralSequenceReport spectral_sequence(const ChainComplex& c) {
  c.check();
  SpectralSequenceReport rep;
  rep.abutment = ext_dims(c);
  if (c.empty()) return rep;
  int tmin = 0, tmax = 0;
  bool first = true;
  for (int n = c.min_deg; n <= c.max_deg(); ++n)
    for (int t : c.tags_at(n)) {
      tmin = first ? t : std::min(tmin, t);
      tmax = first ? t : std::max(tmax, t);
      first = false;
    }
  auto F = [&](int n, int i) {
    std::vector<Vec> vs;
    auto tags = c.tags_at(n);
    for (std::size_t k = 0; k < tags.size(); ++k)
      if (tags[k] >= i) {
        Vec e(c.dim(n));
        e[k] = 1;
        vs.push_back(e);
      }
    return Subspace::span(c.dim(n), vs);
  };
  for (int n = c.min_deg; n < c.max_deg(); ++n)
    for (int i = tmin; i <= tmax; ++i)
      if (!F(n + 1, i).contains(image(c.diff(n), F(n, i))))
        throw ComplexError("spectral_sequence: differential lowers the filtration in degree " + std::to_string(n));
  // Z_r^i in degree n
  auto Z = [&](int n, int i, int r) { return intersect(F(n, i), preimage(c.diff(n), F(n + 1, i + r))); };
  auto B = [&](int n, int i, int r) {  // d Z_r^{i} from degree n−1, living in degree n
    if (c.dim(n - 1) == 0 || c.dim(n) == 0) return Subspace::zero(c.dim(n));
    return image(c.diff(n - 1), Z(n - 1, i, r));
  };
  auto den = [&](int n, int i, int r) { return sum(Z(n, i + 1, r - 1), B(n, i - r + 1, r - 1)); };
  const int last = tmax - tmin + 2;
  rep.last_page = last;
  for (int r = 1; r <= last; ++r) {
    Grid& g = rep.pages[r];
    Grid& dr = rep.differentials[r];
    for (int n = c.min_deg; n <= c.max_deg(); ++n)
      for (int i = tmin; i <= tmax; ++i) {
        std::size_t dimE = Z(n, i, r).dim() - den(n, i, r).dim();
        if (dimE) g[{i, n - i}] = dimE;
        if (dimE == 0 || n == c.max_deg()) continue;
        Subspace target = den(n + 1, i + r, r);
        std::size_t rk = sum(B(n + 1, i, r), target).dim() - target.dim();
        if (rk) dr[{i, n - i}] = rk;
      }
  }
  rep.e_infinity = rep.pages[last];
  rep.converged_at = 2;
  for (int r = last; r >= 2; --r)
    if (!rep.differentials[r].empty()) {
      rep.converged_at = r + 1;
      break;
    }
  for (int n = c.min_deg; n <= c.max_deg(); ++n) {
    std::size_t tot = 0;
    for (int i = tmin; i <= tmax; ++i) tot += rep.dim(last, i, n - i);
    if (tot != rep.abutment.at(n))
      throw std::logic_error("spectral_sequence: E_infinity does not add up to H^" + std::to_string(n));
  }
  return rep;
}

// E_1^{i,j} = Hom♭^i(1, H^j(D(r))) when D_K is strict, so E_2^{i,j} = H^i_st(H^j(D)(r)).
inline SpectralSequenceReport descent_ss(const ModuleComplex& d, int r, std::uint64_t seed = 0) {
  d.check();
  ModuleComplex t = tate_twist(d, r);
  FlatComplex fl = hom_flat(ModuleComplex::single(FilteredPhiNModule::unit(d.p())), t);
  SpectralSequenceReport rep = spectral_sequence(fl.cx);
  PadicHodgeComplex th = theta(t);
  if (!is_strict_complex(th.mk)) {
    rep.warnings.push_back("de Rham side is not strict");
    return rep;
  }
  for (int n = d.min_deg; n <= d.max_deg(); ++n) {
    FilteredPhiNModule h = cohomology_module(th, n);
    if (h.dim() == 0) continue;
    AdmissibilityVerdict v = is_weakly_admissible(h, seed);
    if (!v.admissible()) rep.warnings.push_back("H^" + std::to_string(n) + " is not admissible: " + v.str());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Degeneration.

struct LefschetzData {
  int middle = 0;
  std::map<int, Mat> maps;  // L: D^n -> D^{n+2}, on D_0
};

struct DegenerationReport {
  bool degenerate = false;
  bool lefschetz_ok = true;
  std::string lefschetz_failure;
  std::map<int, std::size_t> cohomology;  // dim H^n
  std::map<int, std::size_t> primitive;   // dim P^n
  SpectralSequenceReport ss;
};

inline DegenerationReport check_degeneration(const ModuleComplex& d, const std::optional<LefschetzData>& l,
                                             int r = 0) {
  d.check();
  DegenerationReport rep;
  ChainComplex u = d.underlying();
  for (int n = d.min_deg; n <= d.max_deg(); ++n) rep.cohomology[n] = ext_dims(u).at(n);
  if (l) {
    auto L = [&](int n) {
      auto it = l->maps.find(n);
      return it == l->maps.end() ? Mat(d.dim(n + 2), d.dim(n)) : it->second;
    };
    for (const auto& [n, m] : l->maps)
      if (m.rows() != d.dim(n + 2) || m.cols() != d.dim(n))
        throw ModuleError("Lefschetz map in degree " + std::to_string(n) + " has shape " + m.shape());
    for (int n = d.min_deg - 2; n <= d.max_deg(); ++n)
      if (!(u.diff(n + 2) * L(n) == L(n + 1) * u.diff(n)))
        throw ModuleError("Lefschetz map is not a chain map in degree " + std::to_string(n));
    // L: D -> D(1)[2] must respect φ, N and the filtrations
    const Rat pinv = Rat(1) / Rat(d.p());
    for (const auto& [n, m] : l->maps) {
      if (m.empty()) continue;
      const FilteredPhiNModule &s = *d.term(n), &t = *d.term(n + 2);
      if (!(m * s.base.phi == pinv * (t.base.phi * m)) || !(m * s.base.n == t.base.n * m))
        throw ModuleError("Lefschetz map in degree " + std::to_string(n) + " does not respect φ and N");
      Mat mk = t.comparison * m * inverse_or_throw(s.comparison, "comparison");
      if (!preserves_filtration(s.fil, t.fil.shifted(1), mk))
        throw ModuleError("Lefschetz map in degree " + std::to_string(n) + " does not respect the filtration");
    }
    // L^k: H^n -> H^{n+2k} on cohomology
    auto power = [&](int n, int k) {
      CohomologyAt hs = cohomology_at(u, n), ht = cohomology_at(u, n + 2 * k);
      Mat m = hs.rep;
      for (int s = 0; s < k; ++s) m = L(n + 2 * s) * m;
      if (ht.dim() == 0) return Mat(0, hs.dim());
      return ht.classify(m);
    };
    const int mid = l->middle;
    for (int i = 1; mid - i >= d.min_deg || mid + i <= d.max_deg(); ++i) {
      std::size_t a = rep.cohomology.count(mid - i) ? rep.cohomology[mid - i] : 0;
      std::size_t b = rep.cohomology.count(mid + i) ? rep.cohomology[mid + i] : 0;
      if (a != b || (a && rank(power(mid - i, i)) != a)) {
        rep.lefschetz_ok = false;
        rep.lefschetz_failure = "L^" + std::to_string(i) + ": H^" + std::to_string(mid - i) + " -> H^" +
                                std::to_string(mid + i) + " is not an isomorphism";
        break;
      }
    }
    if (rep.lefschetz_ok) {
      for (int n = d.min_deg; n <= d.max_deg(); ++n) {
        std::size_t h = rep.cohomology[n];
        rep.primitive[n] = (h && n <= mid) ? kernel_basis(power(n, mid - n + 1)).cols() : 0;
      }
      // H^n = ⊕_k L^k P^{n−2k}
      for (int n = d.min_deg; n <= d.max_deg(); ++n) {
        std::size_t tot = 0;
        int lowest = n > mid ? 2 * mid - n : n;
        for (int q = lowest; q >= d.min_deg; q -= 2) tot += rep.primitive.count(q) ? rep.primitive[q] : 0;
        if (tot != rep.cohomology[n]) {
          rep.lefschetz_ok = false;
          rep.lefschetz_failure = "primitive decomposition fails in degree " + std::to_string(n);
        }
      }
    }
  }
  rep.ss = descent_ss(d, r);
  rep.degenerate = rep.ss.converged_at <= 2;
  return rep;
}

// ---------------------------------------------------------------------------
// C_pst(D): D_st -> D_st ⊕ D_st ⊕ D_K/F^0 -> D_st, with D_st = D_0^G.

struct CPstComplex {
  ChainComplex cx;
  Mat invariants;   // basis of D_st inside D_0
  Mat quotient;     // D_K -> D_K/F^0
  Mat section;      // D_K/F^0 -> D_K
  std::size_t dst = 0, dquot = 0;
  Mat d0() const { return cx.diff(0); }
  Mat d1() const { return cx.diff(1); }
};

inline CPstComplex c_pst(const FilteredPhiNModule& d) {
  require_valid(d);
  CPstComplex c;
  c.invariants = detail::invariant_basis(&d.base);
  Subspace f0 = d.fil.F(0);
  c.quotient = quotient_map(f0);
  c.section = quotient_section(f0);
  const Mat& v = c.invariants;
  const std::size_t s = v.cols(), q = c.quotient.rows();
  c.dst = s;
  c.dquot = q;
  Mat phi = restrict_map(d.base.phi, v, v), nop = restrict_map(d.base.n, v, v);
  if (s == 0) phi = nop = Mat(0, 0);
  Mat d0(2 * s + q, s), d1(s, 2 * s + q);
  d0.set_block(0, 0, nop);
  d0.set_block(s, 0, Mat::identity(s) - phi);
  if (q && s) d0.set_block(2 * s, 0, c.quotient * d.comparison * v);
  d1.set_block(0, 0, Mat::identity(s) - Rat(d.p()) * phi);
  d1.add_block(0, s, nop, -1);
  c.cx = ChainComplex{0, {s, 2 * s + q, s}, {d0, d1}, {}};
  return c;
}

// exp: D_K/F^0 -> H^1(C_pst(D)), b ↦ [(0, 0, b)], in the cohomology basis of cohomology_at(cx, 1).
inline Mat exp_bk(const FilteredPhiNModule& d) {
  CPstComplex c = c_pst(d);
  CohomologyAt h = cohomology_at(c.cx, 1);
  if (c.dquot == 0) return Mat(h.dim(), 0);
  Mat inc(c.cx.dim(1), c.dquot);
  inc.set_block(2 * c.dst, 0, Mat::identity(c.dquot));
  if (h.dim() == 0) return Mat(0, c.dquot);
  return h.classify(inc);
}

}  // namespace hodgeforge
