#pragma once

// Bounded cochain complexes of finite-dimensional Q-spaces, chain maps,
// mapping fibers, cohomology, tensor products and graded Hom spaces.
//
// Every basis vector of a complex may carry an integer tag. Tags are used as
// a column filtration by the spectral-sequence engine: fibers raise the tags of
// their target part by one, so nested fibers record how many "cone steps" a
// coordinate sits away from the base.

#include "hodgeforge/exactlin.hpp"

#include <functional>
#include <map>

namespace hodgeforge {

class ComplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChainComplex {
  int min_deg = 0;
  std::vector<std::size_t> dims;
  std::vector<Mat> d;                  // d[k]: degree min_deg+k -> min_deg+k+1
  std::vector<std::vector<int>> tags;  // empty, or one tag per basis vector

  bool empty() const { return dims.empty(); }
  int max_deg() const { return min_deg + static_cast<int>(dims.size()) - 1; }
  std::size_t dim(int n) const {
    if (n < min_deg || n > max_deg()) return 0;
    return dims[n - min_deg];
  }
  Mat diff(int n) const {
    if (n < min_deg || n >= max_deg()) return Mat(dim(n + 1), dim(n));
    return d[n - min_deg];
  }
  int tag(int n, std::size_t k) const {
    if (tags.empty()) return 0;
    return tags[n - min_deg][k];
  }
  std::vector<int> tags_at(int n) const {
    if (n < min_deg || n > max_deg()) return {};
    if (tags.empty()) return std::vector<int>(dim(n), 0);
    return tags[n - min_deg];
  }

  static ChainComplex make(int lo, int hi, const std::function<std::size_t(int)>& dim_of,
                           const std::function<Mat(int)>& d_of,
                           const std::function<std::vector<int>(int)>& tags_of = {}) {
    ChainComplex c;
    c.min_deg = lo;
    for (int n = lo; n <= hi; ++n) c.dims.push_back(dim_of(n));
    for (int n = lo; n < hi; ++n) {
      Mat m = d_of(n);
      if (m.rows() != dim_of(n + 1) || m.cols() != dim_of(n))
        throw ComplexError("differential d^" + std::to_string(n) + " has shape " + m.shape());
      c.d.push_back(std::move(m));
    }
    if (tags_of)
      for (int n = lo; n <= hi; ++n) c.tags.push_back(tags_of(n));
    return c;
  }

  // Throws unless shapes are consistent and d∘d = 0.
  void check() const {
    if (!dims.empty() && d.size() + 1 != dims.size()) throw ComplexError("wrong number of differentials");
    for (int n = min_deg; n < max_deg(); ++n) {
      const Mat& m = d[n - min_deg];
      if (m.rows() != dim(n + 1) || m.cols() != dim(n))
        throw ComplexError("differential d^" + std::to_string(n) + " has shape " + m.shape());
    }
    for (int n = min_deg; n + 1 < max_deg(); ++n)
      if (!(diff(n + 1) * diff(n)).is_zero()) throw ComplexError("d∘d ≠ 0 at degree " + std::to_string(n));
  }
  bool is_complex() const {
    try {
      check();
      return true;
    } catch (const ComplexError&) {
      return false;
    }
  }
};

struct CohomologyDims {
  int min_deg = 0;
  std::vector<std::size_t> h;
  std::size_t at(int n) const {
    if (n < min_deg || n >= min_deg + static_cast<int>(h.size())) return 0;
    return h[n - min_deg];
  }
  // Dimensions on [lo, hi], zero-padded.
  std::vector<std::size_t> range(int lo, int hi) const {
    std::vector<std::size_t> r;
    for (int n = lo; n <= hi; ++n) r.push_back(at(n));
    return r;
  }
  bool all_zero() const {
    return std::all_of(h.begin(), h.end(), [](std::size_t x) { return x == 0; });
  }
  long euler() const {
    long e = 0;
    for (std::size_t k = 0; k < h.size(); ++k) e += ((min_deg + static_cast<int>(k)) % 2 == 0 ? 1 : -1) * static_cast<long>(h[k]);
    return e;
  }
};

inline bool same_cohomology(const CohomologyDims& a, const CohomologyDims& b) {
  int lo = std::min(a.min_deg, b.min_deg);
  int hi = std::max(a.min_deg + static_cast<int>(a.h.size()), b.min_deg + static_cast<int>(b.h.size()));
  return a.range(lo, hi) == b.range(lo, hi);
}

inline CohomologyDims ext_dims(const ChainComplex& c) {
  c.check();
  CohomologyDims out;
  out.min_deg = c.min_deg;
  std::vector<std::size_t> rk;
  for (int n = c.min_deg; n <= c.max_deg(); ++n) rk.push_back(rank(c.diff(n)));
  for (int n = c.min_deg; n <= c.max_deg(); ++n) {
    std::size_t r_out = rk[n - c.min_deg];
    std::size_t r_in = n > c.min_deg ? rk[n - 1 - c.min_deg] : 0;
    out.h.push_back(c.dim(n) - r_out - r_in);
  }
  return out;
}

inline long euler_characteristic_of_dims(const ChainComplex& c) {
  long e = 0;
  for (int n = c.min_deg; n <= c.max_deg(); ++n) e += (n % 2 == 0 ? 1 : -1) * static_cast<long>(c.dim(n));
  return e;
}

// Cohomology in one degree with explicit bases.
struct CohomologyAt {
  Mat z;    // basis of ker d^n, as columns
  Mat q;    // Z-coordinates -> H-coordinates
  Mat rep;  // representatives of the H basis, as columns in C^n
  std::size_t dim() const { return rep.cols(); }
  // H-coordinates of the classes of the given cycles (columns).
  Mat classify(const Mat& cycles) const {
    if (cycles.cols() == 0 || z.cols() == 0) return Mat(q.rows(), cycles.cols());
    return q * coordinates(z, cycles);
  }
  Vec classify(const Vec& v) const { return classify(Mat::column(v)).col(0); }
};

inline CohomologyAt cohomology_at(const ChainComplex& c, int n) {
  CohomologyAt out;
  Subspace zs = kernel(c.diff(n));
  out.z = zs.basis();
  Subspace bs = image(c.diff(n - 1));
  Subspace bz = zs.dim() ? Subspace::span(coordinates(out.z, bs.basis())) : Subspace::zero(0);
  if (bs.is_zero()) bz = Subspace::zero(zs.dim());
  out.q = quotient_map(bz);
  out.rep = zs.dim() ? Mat(out.z * quotient_section(bz)) : Mat(c.dim(n), 0);
  return out;
}

// ---------------------------------------------------------------------------
// Chain maps (of degree zero).

struct ChainMap {
  int min_deg = 0;
  std::vector<Mat> maps;

  Mat at(int n, std::size_t rows, std::size_t cols) const {
    if (n < min_deg || n >= min_deg + static_cast<int>(maps.size())) return Mat(rows, cols);
    const Mat& m = maps[n - min_deg];
    if (m.rows() != rows || m.cols() != cols)
      throw ComplexError("chain map component at degree " + std::to_string(n) + " has shape " + m.shape());
    return m;
  }
  Mat at(int n, const ChainComplex& src, const ChainComplex& tgt) const { return at(n, tgt.dim(n), src.dim(n)); }

  static ChainMap make(int lo, int hi, const std::function<Mat(int)>& f) {
    ChainMap m;
    m.min_deg = lo;
    for (int n = lo; n <= hi; ++n) m.maps.push_back(f(n));
    return m;
  }
};

inline std::pair<int, int> degree_span(const ChainComplex& a, const ChainComplex& b, int shift_b = 0) {
  if (a.empty() && b.empty()) return {0, -1};
  if (a.empty()) return {b.min_deg + shift_b, b.max_deg() + shift_b};
  if (b.empty()) return {a.min_deg, a.max_deg()};
  return {std::min(a.min_deg, b.min_deg + shift_b), std::max(a.max_deg(), b.max_deg() + shift_b)};
}

inline bool is_chain_map(const ChainMap& f, const ChainComplex& a, const ChainComplex& b) {
  auto [lo, hi] = degree_span(a, b);
  for (int n = lo; n <= hi; ++n)
    if (!(b.diff(n) * f.at(n, a, b) == f.at(n + 1, a, b) * a.diff(n))) return false;
  return true;
}

inline ChainMap compose(const ChainMap& g, const ChainMap& f, const ChainComplex& a, const ChainComplex& b,
                        const ChainComplex& c) {
  auto [lo, hi] = degree_span(a, c);
  return ChainMap::make(lo, hi, [&](int n) { return g.at(n, b, c) * f.at(n, a, b); });
}

inline ChainMap identity_map(const ChainComplex& a) {
  return ChainMap::make(a.min_deg, a.max_deg(), [&](int n) { return Mat::identity(a.dim(n)); });
}

// Mapping fiber: Fib(f)^n = A^n ⊕ B^{n-1}, d(a, b) = (d a, f a − d b).
inline ChainComplex fiber(const ChainComplex& a, const ChainComplex& b, const ChainMap& f) {
  auto [lo, hi] = degree_span(a, b, 1);
  auto dim_of = [&](int n) { return a.dim(n) + b.dim(n - 1); };
  auto d_of = [&](int n) {
    Mat m(dim_of(n + 1), dim_of(n));
    m.set_block(0, 0, a.diff(n));
    m.set_block(a.dim(n + 1), 0, f.at(n, a, b));
    m.set_block(a.dim(n + 1), a.dim(n), -b.diff(n - 1));
    return m;
  };
  auto tags_of = [&](int n) {
    std::vector<int> t = a.tags_at(n);
    for (int x : b.tags_at(n - 1)) t.push_back(x + 1);
    return t;
  };
  return ChainComplex::make(lo, hi, dim_of, d_of, tags_of);
}

// The canonical projection Fib(f) -> A.
inline ChainMap fiber_projection(const ChainComplex& a, const ChainComplex& b, const ChainComplex& fib) {
  return ChainMap::make(fib.min_deg, fib.max_deg(), [&](int n) {
    Mat m(a.dim(n), fib.dim(n));
    m.set_block(0, 0, Mat::identity(a.dim(n)));
    (void)b;
    return m;
  });
}

inline ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  auto [lo, hi] = degree_span(a, b);
  return ChainComplex::make(
      lo, hi, [&](int n) { return a.dim(n) + b.dim(n); },
      [&](int n) { return hodgeforge::direct_sum(a.diff(n), b.diff(n)); },
      [&](int n) {
        std::vector<int> t = a.tags_at(n);
        for (int x : b.tags_at(n)) t.push_back(x);
        return t;
      });
}

inline ChainMap direct_sum(const ChainMap& f, const ChainMap& g, const ChainComplex& a1, const ChainComplex& b1,
                           const ChainComplex& a2, const ChainComplex& b2) {
  auto [lo1, hi1] = degree_span(a1, b1);
  auto [lo2, hi2] = degree_span(a2, b2);
  return ChainMap::make(std::min(lo1, lo2), std::max(hi1, hi2),
                        [&](int n) { return hodgeforge::direct_sum(f.at(n, a1, b1), g.at(n, a2, b2)); });
}

inline ChainComplex negate_differential(ChainComplex c) {
  for (auto& m : c.d) m = -m;
  return c;
}

inline ChainComplex shift(const ChainComplex& c, int k) {
  // C[k]^n = C^{n+k}, d_{C[k]} = (−1)^k d_C
  ChainComplex s = c;
  s.min_deg -= k;
  if (k % 2 != 0) s = negate_differential(s);
  return s;
}

inline bool is_acyclic(const ChainComplex& c) { return ext_dims(c).all_zero(); }

inline bool is_quasi_iso(const ChainMap& f, const ChainComplex& a, const ChainComplex& b) {
  return is_acyclic(fiber(a, b, f));
}

// Map induced on H^n.
inline Mat induced_on_cohomology(const ChainMap& f, const ChainComplex& a, const ChainComplex& b, int n) {
  CohomologyAt ha = cohomology_at(a, n), hb = cohomology_at(b, n);
  return hb.classify(f.at(n, a, b) * ha.rep);
}

// A subcomplex spanned degreewise by the columns of `bases` (assumed d-stable),
// in the coordinates of those bases.
inline ChainComplex subcomplex(const ChainComplex& c, const std::function<Mat(int)>& basis_of) {
  if (c.empty()) return c;
  return ChainComplex::make(
      c.min_deg, c.max_deg(), [&](int n) { return basis_of(n).cols(); },
      [&](int n) { return restrict_map(c.diff(n), basis_of(n), basis_of(n + 1)); });
}

// ---------------------------------------------------------------------------
// Tensor products: (A⊗B)^n = ⊕_{i+j=n} A^i ⊗ B^j, blocks ordered by i.

struct TensorBlock {
  int i, j;
  std::size_t offset, size;
};

struct TensorLayout {
  int lo = 0, hi = -1;
  std::map<int, std::vector<TensorBlock>> blocks;
  std::map<int, std::size_t> dims;
  std::size_t dim(int n) const {
    auto it = dims.find(n);
    return it == dims.end() ? 0 : it->second;
  }
  const TensorBlock* find(int n, int i) const {
    auto it = blocks.find(n);
    if (it == blocks.end()) return nullptr;
    for (const auto& b : it->second)
      if (b.i == i) return &b;
    return nullptr;
  }
};

inline TensorLayout tensor_layout(int amin, const std::vector<std::size_t>& adims, int bmin,
                                  const std::vector<std::size_t>& bdims) {
  TensorLayout t;
  if (adims.empty() || bdims.empty()) return t;
  t.lo = amin + bmin;
  t.hi = amin + static_cast<int>(adims.size()) - 1 + bmin + static_cast<int>(bdims.size()) - 1;
  for (int n = t.lo; n <= t.hi; ++n) {
    std::size_t off = 0;
    for (std::size_t ia = 0; ia < adims.size(); ++ia) {
      int i = amin + static_cast<int>(ia);
      int j = n - i;
      if (j < bmin || j >= bmin + static_cast<int>(bdims.size())) continue;
      std::size_t sz = adims[ia] * bdims[j - bmin];
      t.blocks[n].push_back({i, j, off, sz});
      off += sz;
    }
    t.dims[n] = off;
  }
  return t;
}

// Degreewise operator f_i ⊗ g_j on the tensor product (both degree-preserving).
inline Mat tensor_operator(const TensorLayout& t, int n, const std::function<Mat(int)>& f,
                           const std::function<Mat(int)>& g) {
  Mat m(t.dim(n), t.dim(n));
  auto it = t.blocks.find(n);
  if (it == t.blocks.end()) return m;
  for (const auto& b : it->second) m.set_block(b.offset, b.offset, kron(f(b.i), g(b.j)));
  return m;
}

inline ChainComplex tensor(const ChainComplex& a, const ChainComplex& b) {
  TensorLayout t = tensor_layout(a.min_deg, a.dims, b.min_deg, b.dims);
  if (t.hi < t.lo) return ChainComplex{};
  return ChainComplex::make(
      t.lo, t.hi, [&](int n) { return t.dim(n); },
      [&](int n) {
        Mat m(t.dim(n + 1), t.dim(n));
        for (const auto& blk : t.blocks.at(n)) {
          if (const TensorBlock* to = t.find(n + 1, blk.i + 1))
            m.set_block(to->offset, blk.offset, kron(a.diff(blk.i), Mat::identity(b.dim(blk.j))));
          if (const TensorBlock* to = t.find(n + 1, blk.i)) {
            Rat sgn = (blk.i % 2 == 0) ? 1 : -1;
            m.set_block(to->offset, blk.offset, sgn * kron(Mat::identity(a.dim(blk.i)), b.diff(blk.j)));
          }
        }
        return m;
      });
}

inline ChainMap tensor(const ChainMap& f, const ChainMap& g, const ChainComplex& a1, const ChainComplex& b1,
                       const ChainComplex& a2, const ChainComplex& b2) {
  TensorLayout ts = tensor_layout(a1.min_deg, a1.dims, a2.min_deg, a2.dims);
  TensorLayout tt = tensor_layout(b1.min_deg, b1.dims, b2.min_deg, b2.dims);
  int lo = std::min(ts.lo, tt.lo), hi = std::max(ts.hi, tt.hi);
  return ChainMap::make(lo, hi, [&](int n) {
    Mat m(tt.dim(n), ts.dim(n));
    auto it = ts.blocks.find(n);
    if (it == ts.blocks.end()) return m;
    for (const auto& blk : it->second)
      if (const TensorBlock* to = tt.find(n, blk.i))
        m.set_block(to->offset, blk.offset, kron(f.at(blk.i, a1, b1), g.at(blk.j, a2, b2)));
    return m;
  });
}

// ---------------------------------------------------------------------------
// Graded Hom: Hom^n(A, B) = ⊕_k Hom(A^k, B^{k+n}), optionally restricted to
// the maps commuting with a finite group acting degreewise on both sides.

// Group elements acting on one degree; an empty vector means the trivial action.
using RepLookup = std::function<std::vector<Mat>(int deg)>;

struct HomBlock {
  int src;                  // k: block is Hom(A^k, B^{k+n})
  std::size_t rows, cols;   // dim B^{k+n}, dim A^k
  std::size_t offset, dim;  // coordinates of this block in the Hom space
  bool full = true;         // full Hom, or the subspace `sub`
  Subspace sub;             // in row-major vec coordinates
};

class HomSpace {
 public:
  int degree = 0;
  std::vector<HomBlock> blocks;
  std::size_t dim = 0;

  const HomBlock* find(int src) const {
    for (const auto& b : blocks)
      if (b.src == src) return &b;
    return nullptr;
  }
  Mat block_matrix(const Vec& v, const HomBlock& b) const {
    Vec flat(b.rows * b.cols);
    if (b.full) {
      for (std::size_t k = 0; k < b.dim; ++k) flat[k] = v[b.offset + k];
    } else {
      for (std::size_t k = 0; k < b.dim; ++k) {
        const Rat& c = v[b.offset + k];
        if (c == 0) continue;
        for (std::size_t e = 0; e < flat.size(); ++e) flat[e] += c * b.sub.basis_rows()(k, e);
      }
    }
    return Mat::from_data(b.rows, b.cols, flat);
  }
  std::map<int, Mat> to_blocks(const Vec& v) const {
    std::map<int, Mat> out;
    for (const auto& b : blocks) out.emplace(b.src, block_matrix(v, b));
    return out;
  }
  // Coordinates of a family of block matrices; blocks not listed are zero.
  Vec from_blocks(const std::map<int, Mat>& m) const {
    Vec v(dim);
    for (const auto& [src, x] : m) {
      const HomBlock* b = find(src);
      if (!b) {
        if (!x.is_zero()) throw ComplexError("from_blocks: nonzero component outside Hom space");
        continue;
      }
      if (x.rows() != b->rows || x.cols() != b->cols) throw ComplexError("from_blocks: block shape mismatch");
      if (b->full) {
        for (std::size_t k = 0; k < b->dim; ++k) v[b->offset + k] = x.data()[k];
      } else {
        Vec c = b->sub.coords(x.data());
        for (std::size_t k = 0; k < b->dim; ++k) v[b->offset + k] = c[k];
      }
    }
    return v;
  }
};

inline Subspace equivariant_subspace(const std::vector<Mat>& rs, const std::vector<Mat>& rt, std::size_t rows,
                                     std::size_t cols) {
  std::size_t order = std::max(rs.size(), rt.size());
  if (order == 0) return Subspace::whole(rows * cols);
  Mat proj(rows * cols, rows * cols);
  for (std::size_t g = 0; g < order; ++g) {
    Mat t = rt.empty() ? Mat::identity(rows) : rt[g];
    Mat s = rs.empty() ? Mat::identity(cols) : inverse_or_throw(rs[g], "group element");
    proj += kron(t, s.transpose());
  }
  return image(proj);
}

// Optional further restriction of the block Hom(A^k, B^{k+n}).
using BlockRestrict = std::function<std::optional<Subspace>(int k, int n)>;

inline HomSpace make_hom_space(const ChainComplex& a, const ChainComplex& b, int n, const RepLookup& ra = {},
                               const RepLookup& rb = {}, const BlockRestrict& restrict_to = {}) {
  HomSpace h;
  h.degree = n;
  if (a.empty() || b.empty()) return h;
  for (int k = a.min_deg; k <= a.max_deg(); ++k) {
    std::size_t cols = a.dim(k), rows = b.dim(k + n);
    if (cols == 0 || rows == 0) continue;
    HomBlock blk;
    blk.src = k;
    blk.rows = rows;
    blk.cols = cols;
    blk.offset = h.dim;
    if (ra || rb) {
      std::vector<Mat> rs = ra ? ra(k) : std::vector<Mat>{};
      std::vector<Mat> rt = rb ? rb(k + n) : std::vector<Mat>{};
      if (!rs.empty() || !rt.empty()) {
        blk.full = false;
        blk.sub = equivariant_subspace(rs, rt, rows, cols);
      }
    }
    if (restrict_to) {
      if (auto r = restrict_to(k, n)) {
        blk.sub = blk.full ? *r : intersect(blk.sub, *r);
        blk.full = false;
      }
    }
    blk.dim = blk.full ? rows * cols : blk.sub.dim();
    if (blk.dim == 0) continue;
    h.dim += blk.dim;
    h.blocks.push_back(std::move(blk));
  }
  return h;
}

// Matrix of a linear operator between Hom spaces, given blockwise.
// f(k, X) returns the image of the single-block element X ∈ Hom(A^k, ·).
inline Mat hom_operator(const HomSpace& from, const HomSpace& to,
                        const std::function<std::map<int, Mat>(int, const Mat&)>& f) {
  Mat m(to.dim, from.dim);
  for (const auto& b : from.blocks)
    for (std::size_t k = 0; k < b.dim; ++k) {
      Vec e(from.dim);
      e[b.offset + k] = 1;
      Vec img = to.from_blocks(f(b.src, from.block_matrix(e, b)));
      for (std::size_t r = 0; r < to.dim; ++r) m(r, b.offset + k) = img[r];
    }
  return m;
}

// The Hom complex Hom^•(A, B) with D f = d_B f − (−1)^n f d_A.
struct HomComplex {
  ChainComplex cx;
  std::map<int, HomSpace> spaces;
  const HomSpace& space(int n) const {
    static const HomSpace empty_space;
    auto it = spaces.find(n);
    return it == spaces.end() ? empty_space : it->second;
  }
};

inline HomComplex make_hom_complex(const ChainComplex& a, const ChainComplex& b, const RepLookup& ra = {},
                                   const RepLookup& rb = {}, const BlockRestrict& restrict_to = {}) {
  HomComplex hc;
  if (a.empty() || b.empty()) return hc;
  int lo = b.min_deg - a.max_deg(), hi = b.max_deg() - a.min_deg;
  for (int n = lo; n <= hi; ++n) hc.spaces.emplace(n, make_hom_space(a, b, n, ra, rb, restrict_to));
  hc.cx = ChainComplex::make(
      lo, hi, [&](int n) { return hc.space(n).dim; },
      [&](int n) {
        Rat sgn = (n % 2 == 0) ? 1 : -1;
        return hom_operator(hc.space(n), hc.space(n + 1), [&](int k, const Mat& x) {
          std::map<int, Mat> out;
          out[k] = b.diff(k + n) * x;
          if (a.dim(k - 1) > 0) out[k - 1] = -sgn * (x * a.diff(k - 1));
          return out;
        });
      });
  return hc;
}

// Composition Hom^m(B, C) × Hom^n(A, B) -> Hom^{m+n}(A, C) in block coordinates.
inline Vec compose_hom(const HomSpace& gs, const Vec& g, const HomSpace& fs, const Vec& f, const HomSpace& out) {
  std::map<int, Mat> res;
  auto fb = fs.to_blocks(f);
  auto gb = gs.to_blocks(g);
  for (const auto& [k, x] : fb) {
    auto it = gb.find(k + fs.degree);
    if (it == gb.end()) continue;
    Mat y = it->second * x;
    auto r = res.find(k);
    if (r == res.end())
      res.emplace(k, y);
    else
      r->second += y;
  }
  return out.from_blocks(res);
}

}  // namespace hodgeforge
