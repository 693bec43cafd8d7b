#pragma once

// Exact linear algebra over Q: dense matrices of GMP rationals, reduced row
// echelon forms, and subspaces stored in canonical (RREF) form.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hodgeforge {

using Rat = mpq_class;
using Vec = std::vector<Rat>;

class LinAlgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rat parse_rat(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0) throw LinAlgError("not a rational: '" + s + "'");
  if (q.get_den() == 0) throw LinAlgError("zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

// p-adic valuation of a nonzero rational.
inline int vp(const Rat& q, long p) {
  if (q == 0) throw LinAlgError("valuation of zero");
  mpz_class num = q.get_num(), den = q.get_den(), pp = p;
  mpz_class t;
  int v = static_cast<int>(mpz_remove(t.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t()));
  v -= static_cast<int>(mpz_remove(t.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()));
  return v;
}

inline Rat rat_pow(const Rat& base, int e) {
  Rat r = 1;
  Rat b = e >= 0 ? base : Rat(1) / base;
  for (int i = 0; i < std::abs(e); ++i) r *= b;
  return r;
}

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  Mat(std::initializer_list<std::initializer_list<Rat>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    a_.reserve(r_ * c_);
    for (const auto& row : rows) {
      if (row.size() != c_) throw LinAlgError("ragged matrix literal");
      for (const auto& x : row) a_.push_back(x);
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Mat scalar(std::size_t n, const Rat& s) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }
  static Mat diag(const Vec& d) {
    Mat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static Mat column(const Vec& v) {
    Mat m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }
  static Mat from_columns(std::size_t rows, const std::vector<Vec>& cols) {
    Mat m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw LinAlgError("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }
  static Mat from_rows(std::size_t cols, const std::vector<Vec>& rows) {
    Mat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw LinAlgError("row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }
  bool empty() const { return r_ == 0 || c_ == 0; }

  Rat& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  Vec row(std::size_t i) const { return Vec(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }
  Vec col(std::size_t j) const {
    Vec v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  // Row-major flattening.
  const std::vector<Rat>& data() const { return a_; }
  static Mat from_data(std::size_t rows, std::size_t cols, Vec data) {
    if (data.size() != rows * cols) throw LinAlgError("bad flat matrix size");
    Mat m;
    m.r_ = rows;
    m.c_ = cols;
    m.a_ = std::move(data);
    return m;
  }

  bool is_zero() const { return hodgeforge::is_zero(a_); }

  Mat transpose() const {
    Mat t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Rat trace() const {
    Rat s = 0;
    for (std::size_t i = 0; i < std::min(r_, c_); ++i) s += (*this)(i, i);
    return s;
  }

  Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Mat b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  void set_block(std::size_t r0, std::size_t c0, const Mat& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  void add_block(std::size_t r0, std::size_t c0, const Mat& b, const Rat& s = 1) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) += s * b(i, j);
  }

  Mat& operator+=(const Mat& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Mat& operator*=(const Rat& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator-(Mat a) {
    for (auto& x : a.a_) x = -x;
    return a;
  }
  friend Mat operator*(Mat a, const Rat& s) { return a *= s; }
  friend Mat operator*(const Rat& s, Mat a) { return a *= s; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.c_ != b.r_)
      throw LinAlgError("matrix product shape mismatch " + a.shape() + " * " + b.shape());
    Mat m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const Rat& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
      }
    return m;
  }
  friend Vec operator*(const Mat& a, const Vec& v) {
    if (a.c_ != v.size()) throw LinAlgError("matrix-vector shape mismatch");
    Vec out(a.r_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k)
        if (v[k] != 0) out[i] += a(i, k) * v[k];
    return out;
  }
  friend bool operator==(const Mat& a, const Mat& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }

  std::string shape() const { return std::to_string(r_) + "x" + std::to_string(c_); }
  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < r_; ++i) {
      os << (i ? "; " : "");
      for (std::size_t j = 0; j < c_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
    }
    os << "]";
    return os.str();
  }

 private:
  void check_same(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw LinAlgError("shape mismatch " + shape() + " vs " + o.shape());
  }
  std::size_t r_ = 0, c_ = 0;
  std::vector<Rat> a_;
};

inline Mat pow(const Mat& m, unsigned e) {
  Mat r = Mat::identity(m.rows());
  for (unsigned i = 0; i < e; ++i) r = r * m;
  return r;
}

// Kronecker product; with row-major vec, vec(A X B) = kron(A, B^T) vec(X).
inline Mat kron(const Mat& a, const Mat& b) {
  Mat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      for (std::size_t u = 0; u < b.rows(); ++u)
        for (std::size_t v = 0; v < b.cols(); ++v) k(i * b.rows() + u, j * b.cols() + v) = a(i, j) * b(u, v);
    }
  return k;
}

inline Mat hstack(const std::vector<Mat>& ms, std::size_t rows) {
  std::size_t c = 0;
  for (const auto& m : ms) {
    if (m.rows() != rows) throw LinAlgError("hstack row mismatch");
    c += m.cols();
  }
  Mat out(rows, c);
  std::size_t off = 0;
  for (const auto& m : ms) {
    out.set_block(0, off, m);
    off += m.cols();
  }
  return out;
}

inline Mat vstack(const std::vector<Mat>& ms, std::size_t cols) {
  std::size_t r = 0;
  for (const auto& m : ms) {
    if (m.cols() != cols) throw LinAlgError("vstack column mismatch");
    r += m.rows();
  }
  Mat out(r, cols);
  std::size_t off = 0;
  for (const auto& m : ms) {
    out.set_block(off, 0, m);
    off += m.rows();
  }
  return out;
}

inline Mat direct_sum(const Mat& a, const Mat& b) {
  Mat m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

struct Echelon {
  Mat reduced;                      // RREF, zero rows at the bottom
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

inline Echelon echelon(Mat m) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    Rat inv = 1 / m(row, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      Rat f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    e.pivots.push_back(c);
    ++row;
  }
  e.reduced = std::move(m);
  return e;
}

inline std::size_t rank(const Mat& m) { return echelon(m).rank(); }

// Columns form a basis of ker(m), one vector per free column.
inline Mat kernel_basis(const Mat& m) {
  Echelon e = echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v(m.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    basis.push_back(std::move(v));
  }
  return Mat::from_columns(m.cols(), basis);
}

// Particular solution of A x = b, if one exists.
inline std::optional<Vec> solve(const Mat& a, const Vec& b) {
  if (b.size() != a.rows()) throw LinAlgError("solve: rhs length mismatch");
  Mat aug(a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < a.rows(); ++i) aug(i, a.cols()) = b[i];
  Echelon e = echelon(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  Vec x(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, a.cols());
  return x;
}

// Solves A X = B column by column.
inline std::optional<Mat> solve(const Mat& a, const Mat& b) {
  if (b.rows() != a.rows()) throw LinAlgError("solve: rhs rows mismatch");
  Mat aug = hstack({a, b}, a.rows());
  Echelon e = echelon(aug);
  for (auto p : e.pivots)
    if (p >= a.cols()) return std::nullopt;
  Mat x(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r)
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
  return x;
}

inline std::optional<Mat> inverse(const Mat& m) {
  if (!m.square()) throw LinAlgError("inverse of non-square matrix");
  if (m.rows() == 0) return Mat();
  Echelon e = echelon(hstack({m, Mat::identity(m.rows())}, m.rows()));
  if (e.rank() < m.rows() || e.pivots[m.rows() - 1] >= m.cols()) return std::nullopt;
  return e.reduced.block(0, m.cols(), m.rows(), m.cols());
}

inline Mat inverse_or_throw(const Mat& m, const std::string& what) {
  auto inv = inverse(m);
  if (!inv) throw LinAlgError(what + " is not invertible");
  return *inv;
}

inline Rat det(Mat m) {
  if (!m.square()) throw LinAlgError("det of non-square matrix");
  Rat d = 1;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rat f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

// A subspace of Q^n, stored as the nonzero rows of a reduced row echelon
// form. Two Subspace values are equal iff they span the same space.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : n_(ambient), rows_(0, ambient) {}

  static Subspace zero(std::size_t n) { return Subspace(n); }
  static Subspace whole(std::size_t n) { return from_echelon(n, echelon(Mat::identity(n))); }
  // Span of the columns of `cols`.
  static Subspace span(const Mat& cols) { return span_rows(cols.transpose()); }
  static Subspace span(std::size_t n, const std::vector<Vec>& vecs) {
    return span_rows(Mat::from_rows(n, vecs));
  }
  static Subspace span_rows(const Mat& rows) { return from_echelon(rows.cols(), echelon(rows)); }

  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return rows_.rows(); }
  bool is_zero() const { return dim() == 0; }
  bool is_whole() const { return dim() == n_; }
  const std::vector<std::size_t>& pivots() const { return piv_; }

  // Canonical basis as columns (ambient x dim).
  Mat basis() const { return rows_.transpose(); }
  const Mat& basis_rows() const { return rows_; }
  Vec vector(std::size_t k) const { return rows_.row(k); }

  bool contains(const Vec& v) const {
    if (v.size() != n_) throw LinAlgError("contains: ambient mismatch");
    Vec r = v;
    for (std::size_t k = 0; k < piv_.size(); ++k) {
      Rat c = r[piv_[k]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) r[j] -= c * rows_(k, j);
    }
    return hodgeforge::is_zero(r);
  }
  bool contains(const Subspace& s) const {
    check(s);
    for (std::size_t k = 0; k < s.dim(); ++k)
      if (!contains(s.vector(k))) return false;
    return true;
  }
  // Coordinates of v (assumed in the span) in the canonical basis.
  Vec coords(const Vec& v) const {
    if (!contains(v)) throw LinAlgError("coords: vector not in subspace");
    Vec c(dim());
    for (std::size_t k = 0; k < piv_.size(); ++k) c[k] = v[piv_[k]];
    return c;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.n_ == b.n_ && a.rows_ == b.rows_; }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  // Total order on canonical representations (for sets and deterministic output).
  std::string key() const {
    std::string k = std::to_string(n_) + ":" + std::to_string(dim()) + ":";
    for (const auto& x : rows_.data()) k += x.get_str() + ",";
    return k;
  }
  friend bool operator<(const Subspace& a, const Subspace& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.key() < b.key();
  }

  std::string str() const { return "span" + rows_.str(); }

 private:
  static Subspace from_echelon(std::size_t n, const Echelon& e) {
    Subspace s(n);
    s.rows_ = e.reduced.block(0, 0, e.rank(), n);
    s.piv_ = e.pivots;
    return s;
  }
  void check(const Subspace& o) const {
    if (o.n_ != n_) throw LinAlgError("subspace ambient mismatch");
  }
  std::size_t n_ = 0;
  Mat rows_;
  std::vector<std::size_t> piv_;
};

inline Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw LinAlgError("sum: ambient mismatch");
  return Subspace::span_rows(vstack({a.basis_rows(), b.basis_rows()}, a.ambient()));
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw LinAlgError("intersect: ambient mismatch");
  if (a.is_zero() || b.is_zero()) return Subspace::zero(a.ambient());
  Mat ab = hstack({a.basis(), -b.basis()}, a.ambient());
  Mat k = kernel_basis(ab);
  Mat coeff = k.block(0, 0, a.dim(), k.cols());
  return Subspace::span(a.basis() * coeff);
}

// Surjection Q^n -> Q^{n - dim a} with kernel exactly a; the target coordinates
// are the non-pivot coordinates of a's echelon basis.
inline Mat quotient_map(const Subspace& a) {
  const std::size_t n = a.ambient();
  std::vector<bool> is_pivot(n, false);
  for (auto p : a.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free.push_back(j);
  Mat q(free.size(), n);
  for (std::size_t r = 0; r < free.size(); ++r) {
    const std::size_t j = free[r];
    q(r, j) = 1;
    for (std::size_t k = 0; k < a.pivots().size(); ++k) q(r, a.pivots()[k]) = -a.basis_rows()(k, j);
  }
  return q;
}

// A right inverse of quotient_map(a): unit vectors at the non-pivot coordinates.
inline Mat quotient_section(const Subspace& a) {
  const std::size_t n = a.ambient();
  std::vector<bool> is_pivot(n, false);
  for (auto p : a.pivots()) is_pivot[p] = true;
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) {
      Vec v(n);
      v[j] = 1;
      cols.push_back(std::move(v));
    }
  return Mat::from_columns(n, cols);
}

inline Subspace image(const Mat& f, const Subspace& s) {
  if (f.cols() != s.ambient()) throw LinAlgError("image: shape mismatch");
  if (s.is_zero()) return Subspace::zero(f.rows());
  return Subspace::span(f * s.basis());
}
inline Subspace image(const Mat& f) { return Subspace::span(f); }
inline Subspace kernel(const Mat& f) { return Subspace::span(kernel_basis(f)); }

inline Subspace preimage(const Mat& f, const Subspace& s) {
  if (f.rows() != s.ambient()) throw LinAlgError("preimage: shape mismatch");
  return kernel(quotient_map(s) * f);
}

// Coordinates of the columns of `vectors` with respect to the columns of the
// full-column-rank matrix `basis`.
inline Mat coordinates(const Mat& basis, const Mat& vectors) {
  auto x = solve(basis, vectors);
  if (!x) throw LinAlgError("coordinates: vectors not in span of basis");
  return *x;
}

// Matrix of `op` restricted to span(src) -> span(dst), in the given bases.
inline Mat restrict_map(const Mat& op, const Mat& src, const Mat& dst) {
  if (src.cols() == 0 || dst.cols() == 0) return Mat(dst.cols(), src.cols());
  return coordinates(dst, op * src);
}

// Matrix of `m` modulo a subspace: induced map Q^n/a -> Q^n/a (requires m(a) ⊆ a).
inline Mat induced_on_quotient(const Mat& m, const Subspace& a) {
  return quotient_map(a) * m * quotient_section(a);
}

// Summary of a row reduction.
struct RowReduction {
  std::size_t rank;
  Subspace kernel;
  Subspace image;
  std::vector<std::size_t> pivot_cols;
};

inline RowReduction rref(const Mat& m) {
  Echelon e = echelon(m);
  std::vector<Vec> pivot_columns;
  for (auto p : e.pivots) pivot_columns.push_back(m.col(p));
  return RowReduction{e.rank(), kernel(m), Subspace::span(m.rows(), pivot_columns), e.pivots};
}

enum class SubspaceOp { Sum, Intersect };

inline Subspace subspace_algebra(const Subspace& a, const Subspace& b, SubspaceOp op) {
  return op == SubspaceOp::Sum ? sum(a, b) : intersect(a, b);
}

}  // namespace hodgeforge
