#include "hodgeforge/dfmod.hpp"
#include "hodgeforge/fixtures.hpp"
#include "oracle.hpp"
#include "random_objects.hpp"

#include <gtest/gtest.h>

using namespace hodgeforge;
namespace fx = hodgeforge::fixtures;

namespace {
constexpr long P = 5;
using Dims = std::vector<std::size_t>;
}  // namespace

TEST(DFMod, NewtonNumbers) {
  EXPECT_EQ(t_N(fx::unit(P)), 0);
  EXPECT_EQ(t_N(qp(P, 1)), -1);
  EXPECT_EQ(t_N(fx::tate_curve(P, 1)), 1);
  EXPECT_EQ(t_H(qp(P, 1)), -1);
  EXPECT_EQ(t_H(fx::tate_curve(P, 1)), 1);
}

TEST(DFMod, TwistOfUnit) {
  FilteredPhiNModule u = fx::unit(P);
  EXPECT_TRUE(tate_twist(u, 0) == u);
  FilteredPhiNModule t = tate_twist(u, 1);
  EXPECT_EQ(t.base.phi, Mat{{Rat(1, P)}});
  EXPECT_EQ(t.fil.jumps().begin()->first, -1);
  EXPECT_TRUE(t == qp(P, 1));
  EXPECT_TRUE(tensor(qp(P, 1), qp(P, -1)) == u);
}

TEST(DFMod, AdmissibilityExamples) {
  for (int r = -2; r <= 2; ++r) EXPECT_EQ(is_weakly_admissible(qp(P, r)).status, AdmStatus::Admissible) << r;
  AdmissibilityVerdict bad = is_weakly_admissible(fx::bad_jump(P));
  EXPECT_EQ(bad.status, AdmStatus::NotAdmissible);
  EXPECT_EQ(bad.str(), "NotAdmissible: t_N=0 < t_H=1");
  ASSERT_TRUE(bad.witness);
  EXPECT_TRUE(bad.witness->is_whole());
  AdmissibilityVerdict tate = is_weakly_admissible(fx::tate_curve(P, 1));
  EXPECT_EQ(tate.status, AdmStatus::Admissible);
  // the lattice is {0, e-line, whole}; only the e-line is a proper subobject
  EXPECT_EQ(tate.subobjects_checked, 1u);
  FilteredPhiNModule eline = submodule(fx::tate_curve(P, 1), Mat{{1}, {0}});
  EXPECT_EQ(t_N(eline), 0);
  EXPECT_EQ(t_H(eline), 0);
}

TEST(DFMod, DestabilizingSubobject) {
  // φ = diag(1, p), F^1 = e-line: the φ-stable e-line has t_N = 0 < t_H = 1
  PhiNModule b{P, Mat::diag({1, Rat(P)}), Mat(2, 2), std::nullopt};
  FilteredSpace f = FilteredSpace::from_steps(2, {{0, Subspace::whole(2)}, {1, Subspace::span(2, {Vec{1, 0}})}});
  AdmissibilityVerdict v = is_weakly_admissible(FilteredPhiNModule::make(b, f));
  EXPECT_EQ(v.status, AdmStatus::NotAdmissible);
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(*v.witness == Subspace::span(2, {Vec{1, 0}}));
  EXPECT_EQ(v.witness_t_N, 0);
  EXPECT_EQ(v.witness_t_H, 1);
}

TEST(DFMod, ProbabilisticModeIsSeeded) {
  // scalar φ: every subspace is stable, lattice infinite
  PhiNModule b{P, Mat::scalar(2, Rat(P)), Mat(2, 2), std::nullopt};
  FilteredSpace f = FilteredSpace::from_steps(2, {{0, Subspace::whole(2)}, {1, Subspace::span(2, {Vec{1, 1}})}});
  FilteredPhiNModule d = FilteredPhiNModule::make(b, f);
  AdmissibilityVerdict v = is_weakly_admissible(d, 17, 200);
  EXPECT_EQ(v.status, AdmStatus::NotAdmissible);  // t_N = 2 ≠ t_H = 1
  FilteredPhiNModule ok = FilteredPhiNModule::make(PhiNModule{P, Mat::scalar(2, 1), Mat(2, 2), std::nullopt},
                                                   FilteredSpace::trivial(2));
  AdmissibilityVerdict w = is_weakly_admissible(ok, 17, 200);
  EXPECT_EQ(w.status, AdmStatus::ProbablyAdmissible);
  EXPECT_EQ(w.seed, 17u);
  EXPECT_EQ(w.str(), "ProbablyAdmissible: 200 random trials, seed 17");
  EXPECT_EQ(is_weakly_admissible(ok, 17, 200).str(), w.str());
}

TEST(DFMod, WeakAdmissibilityAgainstBruteForce) {
  // compare against the definition over the enumerated lattice
  testgen::Gen g(61);
  for (int k = 0; k < 80; ++k) {
    PhiNModule b = g.phin(static_cast<std::size_t>(g.uniform(1, 3)));
    FilteredPhiNModule d = FilteredPhiNModule::make(b, g.filtration(b.dim(), t_N(b) + (g.coin(0.2) ? 1 : 0)));
    auto lat = invariant_subspaces(structure_generators(d), d.dim());
    auto* fin = std::get_if<FiniteLattice>(&lat);
    if (!fin) continue;
    bool expect = t_N(d) == t_H(d);
    for (const auto& w : fin->subspaces) {
      if (w.is_zero()) continue;
      FilteredPhiNModule s = submodule(d, w.basis());
      if (t_N(s) < t_H(s)) expect = false;
    }
    EXPECT_EQ(is_weakly_admissible(d).admissible(), expect);
  }
}

TEST(DFMod, HomFlatExamples) {
  EXPECT_EQ(ext_dims(hom_flat(fx::unit(P), fx::unit(P)).cx).range(0, 2), (Dims{1, 1, 0}));
  EXPECT_EQ(ext_dims(hom_flat(fx::unit(P), qp(P, 1)).cx).range(0, 2), (Dims{0, 2, 1}));
  EXPECT_EQ(h_st(fx::unit(P)), (Dims{1, 1, 0}));
  EXPECT_EQ(h_st(qp(P, 1)), (Dims{0, 2, 1}));
  EXPECT_EQ(h_st(qp(P, 1), 3), 0u);
}

TEST(DFMod, HomFlatAgainstOracle) {
  testgen::Gen g(62);
  for (int k = 0; k < 60; ++k) {
    FilteredPhiNModule a = g.module(static_cast<std::size_t>(g.uniform(1, 2)), true, false);
    FilteredPhiNModule b = g.module(static_cast<std::size_t>(g.uniform(1, 3)), true, false);
    if (g.coin(0.3)) b = change_basis(b, g.invertible(b.dim()), g.invertible(b.dim()));
    FlatComplex fl = hom_flat(a, b);
    ASSERT_TRUE(fl.cx.is_complex());
    EXPECT_EQ(ext_dims(fl.cx).range(0, 2), oracle::hom_flat_dims(a, b));
  }
}

TEST(DFMod, EulerCharacteristic) {
  testgen::Gen g(63);
  for (int k = 0; k < 40; ++k) {
    FilteredPhiNModule d = g.module(static_cast<std::size_t>(g.uniform(1, 4)), true, false);
    CohomologyDims h = ext_dims(hom_flat(fx::unit(P), d).cx);
    EXPECT_EQ(h.euler(), static_cast<long>(d.fil.F(0).dim()) - static_cast<long>(d.dim()));
  }
}

TEST(DFMod, HomFlatH0IsMorphisms) {
  testgen::Gen g(64);
  for (int k = 0; k < 40; ++k) {
    FilteredPhiNModule a = g.module(static_cast<std::size_t>(g.uniform(1, 2)));
    FilteredPhiNModule b = g.module(static_cast<std::size_t>(g.uniform(1, 3)));
    EXPECT_EQ(ext_dims(hom_flat(a, b).cx).at(0), testgen::morphism_basis(a, b).size());
  }
}

TEST(DFMod, InvariantUnderChangeOfBasis) {
  testgen::Gen g(65);
  for (int k = 0; k < 20; ++k) {
    FilteredPhiNModule a = g.admissible(static_cast<std::size_t>(g.uniform(1, 2)));
    FilteredPhiNModule b = g.admissible(static_cast<std::size_t>(g.uniform(1, 2)));
    FilteredPhiNModule b2 = change_basis(b, g.invertible(b.dim()), g.invertible(b.dim()));
    EXPECT_EQ(ext_dims(hom_flat(a, b).cx).range(0, 2), ext_dims(hom_flat(a, b2).cx).range(0, 2));
    EXPECT_EQ(is_weakly_admissible(b2).status, AdmStatus::Admissible);
  }
}

TEST(DFMod, ExtensionRecoversCochain) {
  ModuleComplex m = ModuleComplex::single(fx::unit(P)), t = ModuleComplex::single(fx::unit(P));
  Extension ex = build_extension({{0, Mat{{1}}}}, 0, m, t);
  EXPECT_TRUE(ex.f_xi == ex.expected);
  EXPECT_TRUE(is_chain_map(ex.inclusion, t.underlying(), ex.e.underlying()));
  EXPECT_TRUE(is_acyclic(ex.quotient));
  // u = 0 splits
  Extension split = build_extension({}, 0, m, t);
  EXPECT_TRUE(is_zero(split.f_xi));
  EXPECT_TRUE(split.e.terms[0].fil == direct_sum(t.terms[0].fil, m.terms[0].fil));
}

TEST(DFMod, ExtensionRandom) {
  testgen::Gen g(66);
  for (int k = 0; k < 25; ++k) {
    FilteredPhiNModule a = g.admissible(static_cast<std::size_t>(g.uniform(1, 2)));
    FilteredPhiNModule b = g.admissible(static_cast<std::size_t>(g.uniform(1, 2)));
    int j = g.uniform(-1, 0);
    std::map<int, Mat> u;
    if (j == 0) u[0] = g.matrix(b.dim(), a.dim());
    Extension ex = build_extension(u, j, ModuleComplex::single(a), ModuleComplex::single(b));
    EXPECT_TRUE(ex.f_xi == ex.expected);
    ASSERT_NO_THROW(ex.e.check());
  }
}

TEST(DFMod, ExtensionsOfAdmissibleAreAdmissible) {
  // an extension 0 -> T -> E -> M -> 0 in the heart, glued along u: M_K -> T_K
  testgen::Gen g(67);
  for (int k = 0; k < 40; ++k) {
    FilteredPhiNModule m = g.admissible(static_cast<std::size_t>(g.uniform(1, 2)), true, false);
    FilteredPhiNModule t = g.admissible(static_cast<std::size_t>(g.uniform(1, 2)), true, false);
    FilteredPhiNModule e = direct_sum(t, m);
    Mat u = g.matrix(t.dim(), m.dim());
    Mat glue = Mat::identity(e.dim());
    glue.set_block(0, t.dim(), u);
    e.fil = e.fil.transported(glue);
    ASSERT_TRUE(is_morphism(t, e, Mat::identity(e.dim()).block(0, 0, e.dim(), t.dim())));
    EXPECT_EQ(is_weakly_admissible(e).status == AdmStatus::NotAdmissible, false);
  }
}

TEST(DFMod, KernelCokernel) {
  FilteredPhiNModule d = fx::tate_curve(P, 1);
  KernelCokernel z = kernel_cokernel(d, d, Mat(2, 2));
  EXPECT_EQ(z.ker.dim(), 2u);
  EXPECT_EQ(z.coker.dim(), 2u);
  KernelCokernel id = kernel_cokernel(d, d, Mat::identity(2));
  EXPECT_EQ(id.ker.dim(), 0u);
  EXPECT_EQ(id.coker.dim(), 0u);
  EXPECT_TRUE(id.strict);
  EXPECT_THROW(kernel_cokernel(d, d, Mat{{0, 1}, {0, 0}}), ModuleError);
}

TEST(DFMod, MorphismsOfAdmissibleAreStrict) {
  testgen::Gen g(68);
  int nonzero = 0;
  for (int k = 0; k < 60; ++k) {
    FilteredPhiNModule x = g.admissible(1), y = g.admissible(static_cast<std::size_t>(g.uniform(1, 2)));
    FilteredPhiNModule a = direct_sum(x, y), b = direct_sum(x, g.admissible(1));
    if (a.dim() > 3) continue;
    a = change_basis(a, g.invertible(a.dim()), g.invertible(a.dim()));
    auto basis = testgen::morphism_basis(a, b);
    Mat f = testgen::random_combination(g, basis, b.dim(), a.dim());
    if (f.is_zero()) continue;
    ++nonzero;
    KernelCokernel kc = kernel_cokernel(a, b, f);
    EXPECT_TRUE(kc.strict);
    EXPECT_TRUE(is_weakly_admissible(kc.ker).admissible());
    EXPECT_TRUE(is_weakly_admissible(kc.coker).admissible());
  }
  EXPECT_GT(nonzero, 20);
}

TEST(DFMod, NonAdmissibleCanBeNonStrict) {
  // identity from trivial filtration to the shifted one is a non-strict morphism
  FilteredPhiNModule a = fx::unit(P), b = fx::bad_jump(P);
  ASSERT_TRUE(is_morphism(a, b, Mat::identity(1)));
  ASSERT_FALSE(is_morphism(b, a, Mat::identity(1)));
  EXPECT_FALSE(kernel_cokernel(a, b, Mat::identity(1)).strict);
}

TEST(DFMod, TensorAndDualAdmissible) {
  testgen::Gen g(69);
  for (int k = 0; k < 20; ++k) {
    FilteredPhiNModule a = g.admissible(static_cast<std::size_t>(g.uniform(1, 2)));
    FilteredPhiNModule b = g.admissible(static_cast<std::size_t>(g.uniform(1, 2)));
    FilteredPhiNModule ab = tensor(a, b);
    EXPECT_EQ(t_N(ab), t_N(a) * static_cast<long>(b.dim()) + t_N(b) * static_cast<long>(a.dim()));
    EXPECT_EQ(t_H(ab), t_N(ab));
    EXPECT_TRUE(is_weakly_admissible(ab).admissible());
    EXPECT_TRUE(is_weakly_admissible(dual(a)).admissible());
  }
}
