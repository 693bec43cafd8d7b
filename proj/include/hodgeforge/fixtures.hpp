#pragma once

// Named small objects used as fixtures and test inputs.

#include "hodgeforge/syntomic.hpp"

namespace hodgeforge::fixtures {

inline FilteredPhiNModule unit(long p) { return FilteredPhiNModule::unit(p); }

// dim 1, φ = μ, N = 0, trivial filtration.
inline FilteredPhiNModule unramified(long p, const Rat& mu) {
  return FilteredPhiNModule::make(PhiNModule{p, Mat{{mu}}, Mat(1, 1), std::nullopt}, FilteredSpace::trivial(1));
}

// Basis (e, f): φ e = e, φ f = p f, N f = e; F^1 = span(L e + f).
inline FilteredPhiNModule tate_curve(long p, const Rat& L) {
  PhiNModule b{p, Mat{{1, 0}, {0, Rat(p)}}, Mat{{0, 1}, {0, 0}}, std::nullopt};
  FilteredSpace f = FilteredSpace::from_steps(2, {{0, Subspace::whole(2)}, {1, Subspace::span(2, {Vec{L, 1}})}});
  return FilteredPhiNModule::make(b, f);
}

// φ = diag(2, p/2), F^1 = span(e1 + e2).
inline FilteredPhiNModule good_ordinary_elliptic(long p) {
  PhiNModule b{p, Mat::diag({2, Rat(p, 2)}), Mat(2, 2), std::nullopt};
  FilteredSpace f = FilteredSpace::from_steps(2, {{0, Subspace::whole(2)}, {1, Subspace::span(2, {Vec{1, 1}})}});
  return FilteredPhiNModule::make(b, f);
}

// dim 1, φ = 1, single jump at 1: t_N = 0 < t_H = 1.
inline FilteredPhiNModule bad_jump(long p) {
  return FilteredPhiNModule::make(PhiNModule::unit(p), FilteredSpace::trivial(1, 1));
}

// H^0 = 1, H^1 = Tate curve, H^2 = 1(−1), zero differentials; L: H^0 -> H^2(1) the identity.
inline ModuleComplex elliptic_complex(long p, const Rat& L) {
  return ModuleComplex{0, {unit(p), tate_curve(p, L), tate_twist(unit(p), -1)}, {Mat(2, 1), Mat(1, 2)}};
}
inline LefschetzData elliptic_lefschetz() { return LefschetzData{1, {{0, Mat{{1}}}}}; }

// [X -> Y] with H^0 = Q_p(1), H^1 = 1 and a non-split extension between the
// terms. X: basis (e, f), φ = diag(1/p, 1), N f = e, F^{-1} = X, F^0 = span(L e + f).
// Y: φ = [[1,1],[0,1]], N = 0, trivial filtration. d: f ↦ e', e ↦ 0.
inline ModuleComplex nonformal_complex(long p, const Rat& L) {
  PhiNModule xb{p, Mat::diag({Rat(1, p), 1}), Mat{{0, 1}, {0, 0}}, std::nullopt};
  FilteredSpace xf = FilteredSpace::from_steps(2, {{-1, Subspace::whole(2)}, {0, Subspace::span(2, {Vec{L, 1}})}});
  PhiNModule yb{p, Mat{{1, 1}, {0, 1}}, Mat(2, 2), std::nullopt};
  return ModuleComplex{0, {FilteredPhiNModule::make(xb, xf), FilteredPhiNModule::make(yb, FilteredSpace::trivial(2))},
                       {Mat{{0, 1}, {0, 0}}}};
}

// H^0 = 1, H^2 = 1(−1)^2, H^4 = 1(−2); L(1) = (1, 1), L(x, y) = x + y.
inline ModuleComplex lefschetz_surface_complex(long p) {
  FilteredPhiNModule zero = FilteredPhiNModule::make(PhiNModule{p, Mat(0, 0), Mat(0, 0), std::nullopt},
                                                     FilteredSpace::trivial(0));
  FilteredPhiNModule h2 = direct_sum(tate_twist(unit(p), -1), tate_twist(unit(p), -1));
  return ModuleComplex{0,
                       {unit(p), zero, h2, zero, tate_twist(unit(p), -2)},
                       {Mat(0, 1), Mat(2, 0), Mat(0, 2), Mat(1, 0)}};
}
inline LefschetzData lefschetz_surface_lefschetz() {
  return LefschetzData{2, {{0, Mat{{1}, {1}}}, {2, Mat{{1, 1}}}}};
}

}  // namespace hodgeforge::fixtures
