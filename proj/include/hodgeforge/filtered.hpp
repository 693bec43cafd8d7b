#pragma once

// Finite-dimensional spaces with a decreasing, exhaustive, separated
// filtration; filtered maps, strictness, filtered complexes, truncations and
// cohomology objects.

#include "hodgeforge/complex.hpp"

#include <map>
#include <set>

namespace hodgeforge {

class FiltrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A filtration is stored by its jumps: the keys i with gr^i ≠ 0, mapped to
// F^i. For any j, F^j is the value at the smallest key ≥ j (zero past the
// last key). The smallest key carries the whole space.
class FilteredSpace {
 public:
  FilteredSpace() = default;

  // Everything in degree `jump`.
  static FilteredSpace trivial(std::size_t dim, int jump = 0) {
    FilteredSpace f;
    f.dim_ = dim;
    if (dim) f.jumps_.emplace(jump, Subspace::whole(dim));
    return f;
  }

  // From (i, F^i) pairs; F^j for unlisted j is the value at the next listed
  // key. Entries are normalized and validated.
  static FilteredSpace from_steps(std::size_t dim, const std::map<int, Subspace>& steps) {
    FilteredSpace f;
    f.dim_ = dim;
    for (const auto& [i, s] : steps)
      if (s.ambient() != dim) throw FiltrationError("filtration step has wrong ambient dimension");
    Subspace prev = Subspace::zero(dim);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      if (!it->second.contains(prev))
        throw FiltrationError("filtration is not decreasing at " + std::to_string(it->first));
      prev = it->second;
    }
    if (dim && !prev.is_whole()) throw FiltrationError("filtration is not exhaustive");
    for (auto it = steps.begin(); it != steps.end(); ++it) {
      auto nx = std::next(it);
      Subspace next = nx == steps.end() ? Subspace::zero(dim) : nx->second;
      if (it->second != next) f.jumps_.emplace(it->first, it->second);
    }
    return f;
  }

  std::size_t dim() const { return dim_; }
  const std::map<int, Subspace>& jumps() const { return jumps_; }

  Subspace F(int j) const {
    auto it = jumps_.lower_bound(j);
    return it == jumps_.end() ? Subspace::zero(dim_) : it->second;
  }

  std::map<int, std::size_t> gr_dims() const {
    std::map<int, std::size_t> g;
    for (auto it = jumps_.begin(); it != jumps_.end(); ++it) {
      auto nx = std::next(it);
      std::size_t below = nx == jumps_.end() ? 0 : nx->second.dim();
      g[it->first] = it->second.dim() - below;
    }
    return g;
  }

  long t_H() const {
    long t = 0;
    for (const auto& [i, d] : gr_dims()) t += static_cast<long>(i) * static_cast<long>(d);
    return t;
  }

  std::set<int> keys() const {
    std::set<int> k;
    for (const auto& [i, s] : jumps_) k.insert(i);
    return k;
  }

  // F^i(V(r)) = F^{i+r}(V): jumps move by −r.
  FilteredSpace shifted(int r) const {
    FilteredSpace f;
    f.dim_ = dim_;
    for (const auto& [i, s] : jumps_) f.jumps_.emplace(i - r, s);
    return f;
  }

  // Filtration transported along an isomorphism g: F^i ↦ g(F^i).
  FilteredSpace transported(const Mat& g) const {
    std::map<int, Subspace> st;
    for (const auto& [i, s] : jumps_) st.emplace(i, image(g, s));
    return from_steps(g.rows(), st);
  }

  // Induced filtration on a subspace, in the coordinates of basis B (columns).
  FilteredSpace restricted(const Mat& b) const {
    std::map<int, Subspace> st;
    Subspace sb = Subspace::span(b);
    for (const auto& [i, s] : jumps_) {
      Subspace meet = intersect(s, sb);
      st.emplace(i, meet.is_zero() ? Subspace::zero(b.cols()) : Subspace::span(coordinates(b, meet.basis())));
    }
    return from_steps(b.cols(), st);
  }

  // Quotient filtration along a surjection q.
  FilteredSpace pushed(const Mat& q) const {
    std::map<int, Subspace> st;
    for (const auto& [i, s] : jumps_) st.emplace(i, image(q, s));
    return from_steps(q.rows(), st);
  }

  friend bool operator==(const FilteredSpace& a, const FilteredSpace& b) {
    return a.dim_ == b.dim_ && a.jumps_ == b.jumps_;
  }

  std::string str() const {
    std::string s = "{";
    for (const auto& [i, sub] : jumps_) s += std::to_string(i) + ":" + sub.str() + " ";
    return s + "}";
  }

 private:
  std::size_t dim_ = 0;
  std::map<int, Subspace> jumps_;
};

inline std::set<int> union_keys(const FilteredSpace& a, const FilteredSpace& b) {
  std::set<int> k = a.keys();
  for (int i : b.keys()) k.insert(i);
  return k;
}

inline FilteredSpace direct_sum(const FilteredSpace& a, const FilteredSpace& b) {
  std::map<int, Subspace> st;
  const std::size_t n = a.dim() + b.dim();
  for (int i : union_keys(a, b)) {
    std::vector<Vec> vs;
    Subspace fa = a.F(i), fb = b.F(i);
    for (std::size_t k = 0; k < fa.dim(); ++k) {
      Vec v(n);
      Vec x = fa.vector(k);
      std::copy(x.begin(), x.end(), v.begin());
      vs.push_back(v);
    }
    for (std::size_t k = 0; k < fb.dim(); ++k) {
      Vec v(n);
      Vec x = fb.vector(k);
      std::copy(x.begin(), x.end(), v.begin() + static_cast<long>(a.dim()));
      vs.push_back(v);
    }
    st.emplace(i, Subspace::span(n, vs));
  }
  return FilteredSpace::from_steps(n, st);
}

// F^k(A⊗B) = Σ_{i+j=k} F^i A ⊗ F^j B.
inline FilteredSpace tensor(const FilteredSpace& a, const FilteredSpace& b) {
  const std::size_t n = a.dim() * b.dim();
  if (n == 0) return FilteredSpace::trivial(0);
  std::set<int> ks;
  for (int i : a.keys())
    for (int j : b.keys()) ks.insert(i + j);
  std::map<int, Subspace> st;
  for (int k : ks) {
    Subspace acc = Subspace::zero(n);
    for (int i : a.keys()) {
      Subspace fa = a.F(i), fb = b.F(k - i);
      if (fa.is_zero() || fb.is_zero()) continue;
      acc = sum(acc, Subspace::span(kron(fa.basis(), fb.basis())));
    }
    st.emplace(k, acc);
  }
  return FilteredSpace::from_steps(n, st);
}

// F^i(V*) = annihilator of F^{1−i}(V).
inline FilteredSpace dual(const FilteredSpace& a) {
  const std::size_t n = a.dim();
  if (n == 0) return FilteredSpace::trivial(0);
  std::map<int, Subspace> st;
  for (int k : a.keys()) {
    int i = 1 - k;
    // ann(F^k) as column vectors: kernel of (F^k basis)^T
    Subspace fk = a.F(k);
    st.emplace(i, fk.is_zero() ? Subspace::whole(n) : kernel(fk.basis().transpose()));
    Subspace fk1 = a.F(k + 1);
    st.emplace(i - 1, fk1.is_zero() ? Subspace::whole(n) : kernel(fk1.basis().transpose()));
  }
  return FilteredSpace::from_steps(n, st);
}

struct FilteredMap {
  FilteredSpace source, target;
  Mat matrix;
};

inline bool preserves_filtration(const FilteredSpace& s, const FilteredSpace& t, const Mat& m) {
  for (const auto& [i, f] : s.jumps())
    if (!t.F(i).contains(image(m, f))) return false;
  return true;
}

inline bool is_filtered(const FilteredMap& f) { return preserves_filtration(f.source, f.target, f.matrix); }

struct StrictnessReport {
  bool strict = true;
  int index = 0;  // offending i
  Vec witness;    // in F^i N ∩ Im f but not in f(F^i M)
};

inline StrictnessReport is_strict(const FilteredMap& f) {
  Subspace im = image(f.matrix);
  for (int i : union_keys(f.source, f.target)) {
    Subspace lhs = image(f.matrix, f.source.F(i));
    Subspace rhs = intersect(f.target.F(i), im);
    if (lhs == rhs) continue;
    for (std::size_t k = 0; k < rhs.dim(); ++k)
      if (!lhs.contains(rhs.vector(k))) return {false, i, rhs.vector(k)};
  }
  return {};
}

// Filtration-preserving maps m -> t, as a subspace of row-major Hom(m, t).
inline Subspace hom_dr(const FilteredSpace& m, const FilteredSpace& t) {
  const std::size_t rows = t.dim(), cols = m.dim();
  std::vector<Mat> eqs;
  for (const auto& [i, f] : m.jumps()) {
    Mat q = quotient_map(t.F(i));
    if (q.rows() == 0 || f.is_zero()) continue;
    eqs.push_back(kron(q, f.basis().transpose()));
  }
  if (eqs.empty()) return Subspace::whole(rows * cols);
  return kernel(vstack(eqs, rows * cols));
}

// ---------------------------------------------------------------------------

struct FilteredComplex {
  int min_deg = 0;
  std::vector<FilteredSpace> terms;
  std::vector<Mat> d;

  ChainComplex underlying() const {
    ChainComplex c;
    c.min_deg = min_deg;
    for (const auto& t : terms) c.dims.push_back(t.dim());
    c.d = d;
    return c;
  }
  bool empty() const { return terms.empty(); }
  int max_deg() const { return min_deg + static_cast<int>(terms.size()) - 1; }
  FilteredSpace term(int n) const {
    if (n < min_deg || n > max_deg()) return FilteredSpace::trivial(0);
    return terms[n - min_deg];
  }
  Mat diff(int n) const { return underlying().diff(n); }

  void check() const {
    underlying().check();
    for (int n = min_deg; n < max_deg(); ++n)
      if (!preserves_filtration(term(n), term(n + 1), diff(n)))
        throw FiltrationError("differential d^" + std::to_string(n) + " does not preserve the filtration");
  }

  std::set<int> keys() const {
    std::set<int> k;
    for (const auto& t : terms)
      for (int i : t.keys()) k.insert(i);
    return k;
  }
};

inline StrictnessReport first_non_strict(const FilteredComplex& c, int* degree = nullptr) {
  for (int n = c.min_deg; n < c.max_deg(); ++n) {
    StrictnessReport r = is_strict({c.term(n), c.term(n + 1), c.diff(n)});
    if (!r.strict) {
      if (degree) *degree = n;
      return r;
    }
  }
  return {};
}

inline bool is_strict_complex(const FilteredComplex& c) { return first_non_strict(c).strict; }

enum class TruncMode { LE, GE };

inline FilteredComplex truncate(const FilteredComplex& c, TruncMode mode, int n) {
  FilteredComplex out;
  if (c.empty()) return c;
  if (mode == TruncMode::LE) {
    if (n < c.min_deg) return out;
    if (n >= c.max_deg()) return c;
    out.min_deg = c.min_deg;
    for (int k = c.min_deg; k < n; ++k) out.terms.push_back(c.term(k));
    Mat z = kernel_basis(c.diff(n));
    out.terms.push_back(c.term(n).restricted(z));
    for (int k = c.min_deg; k < n - 1; ++k) out.d.push_back(c.diff(k));
    if (n - 1 >= c.min_deg) out.d.push_back(z.cols() ? coordinates(z, c.diff(n - 1)) : Mat(0, c.term(n - 1).dim()));
    return out;
  }
  // τ≥n: ⋯ 0 → coim(d^{n−1}) → M^n → M^{n+1} → ⋯
  if (n > c.max_deg()) return out;
  if (n <= c.min_deg) return c;
  Subspace k = kernel(c.diff(n - 1));
  Mat q = quotient_map(k), s = quotient_section(k);
  out.min_deg = n - 1;
  out.terms.push_back(c.term(n - 1).pushed(q));
  for (int j = n; j <= c.max_deg(); ++j) out.terms.push_back(c.term(j));
  out.d.push_back(c.diff(n - 1) * s);
  for (int j = n; j < c.max_deg(); ++j) out.d.push_back(c.diff(j));
  return out;
}

// H^n = ker(d^n)/im(d^{n−1}) with the quotient of the filtration induced on ker(d^n).
struct FilteredCohomology {
  FilteredSpace space;
  CohomologyAt data;
};

inline FilteredCohomology cohomology_object(const FilteredComplex& c, int n) {
  FilteredCohomology h;
  h.data = cohomology_at(c.underlying(), n);
  if (h.data.z.cols() == 0) {
    h.space = FilteredSpace::trivial(0);
    return h;
  }
  FilteredSpace onz = c.term(n).restricted(h.data.z);
  h.space = onz.pushed(h.data.q);
  return h;
}

struct FilteredChainMap {
  int min_deg = 0;
  std::vector<Mat> maps;
  ChainMap plain() const { return ChainMap{min_deg, maps}; }
};

// gr^i of a filtered complex as a plain complex, with the bases used.
struct GradedPiece {
  ChainComplex cx;
  std::vector<Mat> lift;    // per degree: basis of F^i (columns)
  std::vector<Mat> proj;    // per degree: F^i-coords -> gr^i coords
  std::vector<Mat> section; // per degree: gr^i coords -> F^i-coords
};

inline GradedPiece graded_piece(const FilteredComplex& c, int i) {
  GradedPiece g;
  if (c.empty()) return g;
  for (int n = c.min_deg; n <= c.max_deg(); ++n) {
    Subspace fi = c.term(n).F(i), fi1 = c.term(n).F(i + 1);
    Mat b = fi.basis();
    Subspace inner = fi1.is_zero() ? Subspace::zero(fi.dim()) : Subspace::span(coordinates(b, fi1.basis()));
    g.lift.push_back(b);
    g.proj.push_back(quotient_map(inner));
    g.section.push_back(quotient_section(inner));
  }
  g.cx = ChainComplex::make(
      c.min_deg, c.max_deg(), [&](int n) { return g.proj[n - c.min_deg].rows(); },
      [&](int n) {
        const std::size_t a = n - c.min_deg;
        Mat img = c.diff(n) * g.lift[a] * g.section[a];
        if (g.lift[a + 1].cols() == 0) return Mat(0, img.cols());
        return Mat(g.proj[a + 1] * coordinates(g.lift[a + 1], img));
      });
  return g;
}

inline bool is_quasi_iso_filtered(const FilteredChainMap& f, const FilteredComplex& a, const FilteredComplex& b) {
  for (int n = std::min(a.min_deg, b.min_deg); n <= std::max(a.max_deg(), b.max_deg()); ++n) {
    Mat m = f.plain().at(n, b.term(n).dim(), a.term(n).dim());
    if (!preserves_filtration(a.term(n), b.term(n), m)) return false;
  }
  std::set<int> ks = a.keys();
  for (int i : b.keys()) ks.insert(i);
  for (int i : ks) {
    GradedPiece ga = graded_piece(a, i), gb = graded_piece(b, i);
    ChainMap gm;
    int lo = std::min(a.empty() ? 0 : a.min_deg, b.empty() ? 0 : b.min_deg);
    int hi = std::max(a.max_deg(), b.max_deg());
    gm = ChainMap::make(lo, hi, [&](int n) {
      std::size_t rows = gb.cx.dim(n), cols = ga.cx.dim(n);
      if (rows == 0 || cols == 0) return Mat(rows, cols);
      Mat m = f.plain().at(n, b.term(n).dim(), a.term(n).dim());
      Mat img = m * ga.lift[n - a.min_deg] * ga.section[n - a.min_deg];
      return Mat(gb.proj[n - b.min_deg] * coordinates(gb.lift[n - b.min_deg], img));
    });
    if (!is_quasi_iso(gm, ga.cx, gb.cx)) return false;
  }
  return true;
}

inline std::map<int, std::size_t> gr_dims(const FilteredSpace& m) { return m.gr_dims(); }
inline long t_H(const FilteredSpace& m) { return m.t_H(); }

}  // namespace hodgeforge
