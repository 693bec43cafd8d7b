#pragma once

// Common invariant subspaces of a family of matrices.
//
// Submodules of V over the algebra A generated by the family are enumerated
// through socles: every nonzero submodule contains a simple one, and when the
// socle of V/W is multiplicity-free its simple submodules are exactly its
// isotypic components. A repeated simple constituent yields a projective line
// of simple submodules, reported as an infinite family.

#include "hodgeforge/exactlin.hpp"
#include "hodgeforge/poly.hpp"

#include <map>
#include <set>
#include <variant>

namespace hodgeforge {

struct InfiniteFamily {
  Subspace base;       // submodule W
  Subspace component;  // W ⊂ component; component/W is isotypic and not simple
};

struct FiniteLattice {
  std::vector<Subspace> subspaces;  // sorted by (dim, canonical form)
};

using InvariantLattice = std::variant<FiniteLattice, InfiniteFamily>;

// Smallest subspace containing `seed` and stable under every generator.
inline Subspace stable_closure(const std::vector<Mat>& gens, const Subspace& seed) {
  Subspace cur = seed;
  for (;;) {
    Subspace next = cur;
    for (const auto& g : gens) next = sum(next, image(g, cur));
    if (next.dim() == cur.dim()) return cur;
    cur = next;
  }
}

inline Subspace cyclic_submodule(const std::vector<Mat>& gens, const Vec& v) {
  return stable_closure(gens, Subspace::span(v.size(), {v}));
}

// Largest stable subspace inside s.
inline Subspace stable_core(const std::vector<Mat>& gens, const Subspace& s) {
  Subspace cur = s;
  for (;;) {
    Subspace next = cur;
    for (const auto& g : gens) next = intersect(next, preimage(g, cur));
    if (next.dim() == cur.dim()) return cur;
    cur = next;
  }
}

inline bool is_stable(const std::vector<Mat>& gens, const Subspace& s) {
  for (const auto& g : gens)
    if (!s.contains(image(g, s))) return false;
  return true;
}

namespace detail {

// Basis (as matrices) of the unital algebra generated by gens.
inline std::vector<Mat> algebra_basis(const std::vector<Mat>& gens, std::size_t n) {
  std::vector<Mat> basis{Mat::identity(n)};
  Subspace span = Subspace::span(n * n, {Mat::identity(n).data()});
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (const auto& g : gens) {
      Mat w = g * basis[k];
      if (span.contains(w.data())) continue;
      span = sum(span, Subspace::span(n * n, {w.data()}));
      basis.push_back(std::move(w));
    }
  return basis;
}

inline Subspace socle(const std::vector<Mat>& gens, std::size_t n) {
  if (n == 0) return Subspace::zero(0);
  std::vector<Mat> alg = algebra_basis(gens, n);
  const std::size_t m = alg.size();
  Mat form(m, m);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = u; v < m; ++v) form(u, v) = form(v, u) = (alg[u] * alg[v]).trace();
  Mat rad = kernel_basis(form);
  std::vector<Mat> rows;
  for (std::size_t j = 0; j < rad.cols(); ++j) {
    Mat x(n, n);
    for (std::size_t u = 0; u < m; ++u)
      if (rad(u, j) != 0) x += rad(u, j) * alg[u];
    rows.push_back(x);
  }
  if (rows.empty()) return Subspace::whole(n);
  return kernel(vstack(rows, n));
}

// Linear span (as flattened matrices) of {X : X g = g X for all g}.
inline std::vector<Mat> commutant(const std::vector<Mat>& gens, std::size_t n) {
  if (gens.empty()) {
    std::vector<Mat> all;
    for (std::size_t k = 0; k < n * n; ++k) {
      Vec v(n * n);
      v[k] = 1;
      all.push_back(Mat::from_data(n, n, v));
    }
    return all;
  }
  std::vector<Mat> eqs;
  for (const auto& g : gens) eqs.push_back(kron(Mat::identity(n), g.transpose()) - kron(g, Mat::identity(n)));
  Mat k = kernel_basis(vstack(eqs, n * n));
  std::vector<Mat> out;
  for (std::size_t j = 0; j < k.cols(); ++j) out.push_back(Mat::from_data(n, n, k.col(j)));
  return out;
}

// Isotypic components of a semisimple module (gens acting on Q^n). Returns
// nullopt when the endomorphism algebra is too large to be a product of
// division algebras, i.e. some simple constituent repeats.
inline std::optional<std::vector<Subspace>> isotypic_components(const std::vector<Mat>& gens, std::size_t n) {
  std::vector<Mat> e = commutant(gens, n);
  if (e.size() > n) return std::nullopt;
  std::vector<Mat> eqs;
  for (const auto& ej : e) {
    std::vector<Vec> cols;
    for (const auto& ek : e) cols.push_back((ek * ej - ej * ek).data());
    eqs.push_back(Mat::from_columns(n * n, cols));
  }
  Mat zc = kernel_basis(vstack(eqs, e.size()));
  std::vector<Mat> zb;
  for (std::size_t j = 0; j < zc.cols(); ++j) {
    Mat x(n, n);
    for (std::size_t k = 0; k < e.size(); ++k)
      if (zc(k, j) != 0) x += zc(k, j) * e[k];
    zb.push_back(x);
  }
  for (long t = 1; t < 64; ++t) {
    Mat elt(n, n);
    Rat c = 1;
    for (const auto& b : zb) {
      elt += c * b;
      c *= t;
    }
    Poly mp = minimal_polynomial(elt);
    if (static_cast<std::size_t>(mp.degree()) != zb.size()) continue;
    std::vector<Subspace> comps;
    for (const auto& f : factor_squarefree(mp)) comps.push_back(kernel(f.eval(elt)));
    return comps;
  }
  throw LinAlgError("isotypic_components: no generating central element found");
}

}  // namespace detail

inline InvariantLattice invariant_subspaces(const std::vector<Mat>& gens, std::size_t n) {
  for (const auto& g : gens)
    if (g.rows() != n || g.cols() != n) throw LinAlgError("invariant_subspaces: generator of wrong size");
  std::set<Subspace> found;
  std::vector<Subspace> stack{Subspace::zero(n)};
  found.insert(Subspace::zero(n));
  while (!stack.empty()) {
    Subspace w = stack.back();
    stack.pop_back();
    if (w.is_whole()) continue;
    Mat q = quotient_map(w), s = quotient_section(w);
    const std::size_t m = q.rows();
    std::vector<Mat> qg;
    for (const auto& g : gens) qg.push_back(q * g * s);
    Subspace soc = detail::socle(qg, m);
    Mat sb = soc.basis();
    std::vector<Mat> sg;
    for (const auto& g : qg) sg.push_back(restrict_map(g, sb, sb));
    auto comps = detail::isotypic_components(sg, soc.dim());
    if (!comps) return InfiniteFamily{w, preimage(q, soc)};
    for (const auto& comp : *comps) {
      Subspace inside = Subspace::span(sb * comp.basis());
      Subspace cyc = cyclic_submodule(qg, inside.vector(0));
      Subspace up = preimage(q, inside);
      if (cyc.dim() < inside.dim()) return InfiniteFamily{w, up};
      if (found.insert(up).second) stack.push_back(up);
    }
  }
  return FiniteLattice{std::vector<Subspace>(found.begin(), found.end())};
}

}  // namespace hodgeforge
