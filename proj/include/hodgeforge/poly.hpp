#pragma once

// Univariate polynomials over Q, minimal polynomials of matrices, and
// factorization into irreducibles over Q (big-prime Zassenhaus).

#include "hodgeforge/exactlin.hpp"

#include <gmpxx.h>

#include <functional>
#include <vector>

namespace hodgeforge {

// Coefficients lowest degree first; no trailing zeros (the zero polynomial is empty).
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }

  static Poly x() { return Poly({Rat(0), Rat(1)}); }
  static Poly constant(const Rat& a) { return Poly({a}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rat& lead() const { return c_.back(); }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }

  Poly monic() const {
    if (is_zero()) return *this;
    Poly r = *this;
    Rat l = lead();
    for (auto& a : r.c_) a /= l;
    return r;
  }
  Poly derivative() const {
    std::vector<Rat> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
    return Poly(d);
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return Poly(c);
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return Poly(c);
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(c);
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  // Euclidean division; returns {quotient, remainder}.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw LinAlgError("polynomial division by zero");
    std::vector<Rat> r = a.c_, q(a.c_.size() >= b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 0);
    for (int i = static_cast<int>(r.size()) - 1; i >= b.degree(); --i) {
      Rat f = r[i] / b.lead();
      if (f == 0) continue;
      q[i - b.degree()] = f;
      for (int j = 0; j <= b.degree(); ++j) r[i - b.degree() + j] -= f * b.c_[j];
    }
    return {Poly(q), Poly(r)};
  }
  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  Mat eval(const Mat& m) const {
    Mat r(m.rows(), m.cols());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * m + Mat::scalar(m.rows(), *it);
    return r;
  }

  std::string str() const {
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c_[i].get_str() + ")";
      if (i > 0) s += "x^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rat> c_;
};

// Minimal polynomial (monic) of a square matrix via linear dependence of powers.
inline Poly minimal_polynomial(const Mat& m) {
  const std::size_t n = m.rows();
  if (n == 0) return Poly::constant(1);
  std::vector<Vec> powers;
  Mat p = Mat::identity(n);
  for (std::size_t k = 0; k <= n; ++k) {
    Mat cols = Mat::from_columns(n * n, powers);
    if (!powers.empty()) {
      auto sol = solve(cols, p.data());
      if (sol) {
        std::vector<Rat> c(k + 1);
        for (std::size_t i = 0; i < k; ++i) c[i] = -(*sol)[i];
        c[k] = 1;
        return Poly(c);
      }
    }
    powers.push_back(p.data());
    p = p * m;
  }
  throw LinAlgError("minimal polynomial: Cayley-Hamilton violated");
}

namespace detail {

using ZPoly = std::vector<mpz_class>;  // lowest degree first

inline void ztrim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int zdeg(const ZPoly& a) { return static_cast<int>(a.size()) - 1; }

inline mpz_class modp(const mpz_class& x, const mpz_class& p) {
  mpz_class r = x % p;
  if (r < 0) r += p;
  return r;
}

inline ZPoly zmod(ZPoly a, const mpz_class& p) {
  for (auto& c : a) c = modp(c, p);
  ztrim(a);
  return a;
}

inline ZPoly pmul(const ZPoly& a, const ZPoly& b, const mpz_class& p) {
  if (a.empty() || b.empty()) return {};
  ZPoly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return zmod(c, p);
}

inline ZPoly psub(const ZPoly& a, const ZPoly& b, const mpz_class& p) {
  ZPoly c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = (i < a.size() ? a[i] : mpz_class(0)) - (i < b.size() ? b[i] : mpz_class(0));
  return zmod(c, p);
}

inline mpz_class pinv(const mpz_class& a, const mpz_class& p) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0) throw LinAlgError("not invertible mod p");
  return r;
}

inline std::pair<ZPoly, ZPoly> pdivmod(ZPoly a, const ZPoly& b, const mpz_class& p) {
  if (b.empty()) throw LinAlgError("division by zero polynomial mod p");
  mpz_class li = pinv(b.back(), p);
  ZPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  for (int i = zdeg(a); i >= zdeg(b); --i) {
    mpz_class f = modp(a[i] * li, p);
    if (f == 0) continue;
    q[i - zdeg(b)] = f;
    for (int j = 0; j <= zdeg(b); ++j) a[i - zdeg(b) + j] = modp(a[i - zdeg(b) + j] - f * b[j], p);
  }
  ztrim(a);
  ztrim(q);
  return {q, a};
}

inline ZPoly pmonic(ZPoly a, const mpz_class& p) {
  if (a.empty()) return a;
  mpz_class li = pinv(a.back(), p);
  for (auto& c : a) c = modp(c * li, p);
  return a;
}

inline ZPoly pgcd(ZPoly a, ZPoly b, const mpz_class& p) {
  while (!b.empty()) {
    ZPoly r = pdivmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return pmonic(a, p);
}

inline ZPoly ppowmod(ZPoly base, mpz_class e, const ZPoly& mod, const mpz_class& p) {
  ZPoly result{1};
  base = pdivmod(base, mod, p).second;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = pdivmod(pmul(result, base, p), mod, p).second;
    e >>= 1;
    if (e > 0) base = pdivmod(pmul(base, base, p), mod, p).second;
  }
  return result;
}

inline void equal_degree_split(const ZPoly& f, int d, const mpz_class& p, gmp_randclass& rng,
                               std::vector<ZPoly>& out) {
  if (zdeg(f) == d) {
    out.push_back(f);
    return;
  }
  mpz_class e;
  mpz_pow_ui(e.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  for (;;) {
    ZPoly a(zdeg(f));
    for (auto& c : a) c = rng.get_z_range(p);
    ztrim(a);
    if (zdeg(a) < 1) continue;
    ZPoly b = psub(ppowmod(a, e, f, p), ZPoly{1}, p);
    ZPoly g = pgcd(f, b, p);
    if (zdeg(g) > 0 && zdeg(g) < zdeg(f)) {
      equal_degree_split(g, d, p, rng, out);
      equal_degree_split(pdivmod(f, g, p).first, d, p, rng, out);
      return;
    }
  }
}

// Irreducible factors of a monic squarefree polynomial over F_p (p odd).
inline std::vector<ZPoly> factor_mod_p(ZPoly f, const mpz_class& p, gmp_randclass& rng) {
  std::vector<ZPoly> out;
  ZPoly w{0, 1};
  const ZPoly x{0, 1};
  for (int d = 1; 2 * d <= zdeg(f); ++d) {
    w = ppowmod(w, p, f, p);
    ZPoly g = pgcd(f, psub(w, x, p), p);
    if (zdeg(g) > 0) {
      equal_degree_split(g, d, p, rng, out);
      f = pdivmod(f, g, p).first;
      w = pdivmod(w, f, p).second;
    }
  }
  if (zdeg(f) > 0) out.push_back(f);
  return out;
}

inline mpz_class content(const ZPoly& a) {
  mpz_class g = 0;
  for (const auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

inline ZPoly primitive(ZPoly a) {
  mpz_class g = content(a);
  if (g == 0) return a;
  if (a.back() < 0) g = -g;
  for (auto& c : a) c /= g;
  return a;
}

// Exact division over Z; nullopt when b does not divide a.
inline std::optional<ZPoly> zdiv_exact(ZPoly a, const ZPoly& b) {
  ZPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  for (int i = zdeg(a); i >= zdeg(b); --i) {
    if (a[i] == 0) continue;
    if (a[i] % b.back() != 0) return std::nullopt;
    mpz_class f = a[i] / b.back();
    q[i - zdeg(b)] = f;
    for (int j = 0; j <= zdeg(b); ++j) a[i - zdeg(b) + j] -= f * b[j];
  }
  ztrim(a);
  if (!a.empty()) return std::nullopt;
  ztrim(q);
  return q;
}

inline ZPoly to_integer_primitive(const Poly& f) {
  mpz_class l = 1;
  for (const auto& c : f.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  ZPoly z;
  for (const auto& c : f.coeffs()) z.push_back(mpz_class(c.get_num() * (l / c.get_den())));
  return primitive(z);
}

inline Poly to_rational_monic(const ZPoly& z) {
  std::vector<Rat> c;
  for (const auto& x : z) c.emplace_back(x);
  return Poly(c).monic();
}

}  // namespace detail

// Irreducible monic factors over Q of a squarefree polynomial, sorted by
// degree then coefficients for determinism.
inline std::vector<Poly> factor_squarefree(const Poly& f) {
  using namespace detail;
  if (f.degree() < 1) return {};
  if (Poly::gcd(f, f.derivative()).degree() > 0) throw LinAlgError("factor_squarefree: input not squarefree");
  if (f.degree() == 1) return {f.monic()};

  ZPoly g = to_integer_primitive(f);
  mpz_class norm2 = 0;
  for (const auto& c : g) norm2 += c * c;
  mpz_class norm = sqrt(norm2) + 1;
  mpz_class bound = norm * abs(g.back());
  bound <<= static_cast<unsigned long>(zdeg(g) + 1);
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0x5eed);

  mpz_class p = bound;
  ZPoly gp;
  for (;;) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (g.back() % p == 0) continue;
    gp = zmod(g, p);
    ZPoly dg;
    for (std::size_t i = 1; i < g.size(); ++i) dg.push_back(g[i] * static_cast<long>(i));
    if (zdeg(pgcd(gp, zmod(dg, p), p)) == 0) break;
  }
  std::vector<ZPoly> mods = factor_mod_p(pmonic(gp, p), p, rng);

  std::vector<Poly> result;
  ZPoly rest = g;
  std::size_t s = 1;
  while (2 * s <= mods.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
      ZPoly cand{modp(rest.back(), p)};
      for (auto i : idx) cand = pmul(cand, mods[i], p);
      for (auto& c : cand)
        if (c > p / 2) c -= p;
      cand = primitive(cand);
      if (auto q = zdiv_exact(rest, cand)) {
        result.push_back(to_rational_monic(cand));
        rest = primitive(*q);
        std::vector<ZPoly> remaining;
        for (std::size_t i = 0; i < mods.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end()) remaining.push_back(mods[i]);
        mods = std::move(remaining);
        found = true;
        break;
      }
      // next combination
      int k = static_cast<int>(s) - 1;
      while (k >= 0 && idx[k] == mods.size() - s + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (std::size_t j = k + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (zdeg(rest) > 0) result.push_back(to_rational_monic(rest));
  std::sort(result.begin(), result.end(), [](const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i)
      if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
    return false;
  });
  return result;
}

}  // namespace hodgeforge
