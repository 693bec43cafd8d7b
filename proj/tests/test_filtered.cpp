#include "hodgeforge/filtered.hpp"
#include "random_objects.hpp"

#include <gtest/gtest.h>

using namespace hodgeforge;

namespace {
FilteredSpace line_jump(std::size_t n, const Vec& v, int hi, int lo = 0) {
  return FilteredSpace::from_steps(n, {{lo, Subspace::whole(n)}, {hi, Subspace::span(n, {v})}});
}
}  // namespace

TEST(Filtered, HodgeNumbers) {
  FilteredSpace t = FilteredSpace::trivial(3);
  EXPECT_EQ(t.gr_dims(), (std::map<int, std::size_t>{{0, 3}}));
  EXPECT_EQ(t.t_H(), 0);
  EXPECT_EQ(FilteredSpace::trivial(1, -1).t_H(), -1);
  EXPECT_EQ(line_jump(2, Vec{1, 1}, 1).t_H(), 1);
}

TEST(Filtered, RejectsBadSteps) {
  EXPECT_THROW(FilteredSpace::from_steps(2, {{0, Subspace::span(2, {Vec{1, 0}})}}), FiltrationError);
  EXPECT_THROW(FilteredSpace::from_steps(2, {{0, Subspace::span(2, {Vec{1, 0}})}, {1, Subspace::whole(2)}}),
               FiltrationError);
}

TEST(Filtered, Strictness) {
  FilteredSpace a = FilteredSpace::trivial(2);
  FilteredMap id{a, a, Mat::identity(2)};
  EXPECT_TRUE(is_strict(id).strict);
  FilteredMap zero{a, a, Mat(2, 2)};
  EXPECT_TRUE(is_strict(zero).strict);
  // a line with trivial filtration into a plane whose F^1 is that line
  FilteredMap inc{FilteredSpace::trivial(1), line_jump(2, Vec{1, 0}, 1), Mat{{1}, {0}}};
  EXPECT_TRUE(is_filtered(inc));
  StrictnessReport r = is_strict(inc);
  EXPECT_FALSE(r.strict);
  EXPECT_EQ(r.index, 1);
}

TEST(Filtered, HomDr) {
  FilteredSpace t = FilteredSpace::trivial(2);
  EXPECT_TRUE(hom_dr(t, t).is_whole());
  EXPECT_TRUE(hom_dr(FilteredSpace::trivial(1, 1), FilteredSpace::trivial(1, 0)).is_zero());
  EXPECT_TRUE(hom_dr(FilteredSpace::trivial(1, 0), FilteredSpace::trivial(1, 1)).is_whole());
  // hom_dr(unit, M) ≅ F^0 M
  testgen::Gen g(41);
  for (int k = 0; k < 20; ++k) {
    std::size_t n = static_cast<std::size_t>(g.uniform(1, 3));
    FilteredSpace m = g.filtration(n, g.uniform(-2, 2));
    EXPECT_EQ(hom_dr(FilteredSpace::trivial(1), m).dim(), m.F(0).dim());
  }
}

TEST(Filtered, SumTensorDual) {
  testgen::Gen g(42);
  for (int k = 0; k < 30; ++k) {
    std::size_t n = static_cast<std::size_t>(g.uniform(1, 3)), m = static_cast<std::size_t>(g.uniform(1, 3));
    FilteredSpace a = g.filtration(n, g.uniform(-2, 2)), b = g.filtration(m, g.uniform(-2, 2));
    EXPECT_EQ(direct_sum(a, b).t_H(), a.t_H() + b.t_H());
    EXPECT_EQ(tensor(a, b).t_H(), a.t_H() * static_cast<long>(m) + b.t_H() * static_cast<long>(n));
    EXPECT_EQ(dual(a).t_H(), -a.t_H());
    EXPECT_TRUE(dual(dual(a)) == a);
    EXPECT_TRUE(a.shifted(2).shifted(-2) == a);
  }
}

TEST(Filtered, TruncationOfConcentratedComplex) {
  FilteredComplex c{1, {FilteredSpace::trivial(2)}, {}};
  EXPECT_EQ(truncate(c, TruncMode::LE, 1).underlying().dims, c.underlying().dims);
  EXPECT_TRUE(truncate(c, TruncMode::GE, 2).empty() || ext_dims(truncate(c, TruncMode::GE, 2).underlying()).all_zero());
}

TEST(Filtered, TruncationOfAcyclic) {
  FilteredComplex c{0, {FilteredSpace::trivial(1), FilteredSpace::trivial(1)}, {Mat{{1}}}};
  FilteredComplex t = truncate(c, TruncMode::LE, 0);
  EXPECT_EQ(ext_dims(t.underlying()).at(0), 0u);
}

TEST(Filtered, TruncationCohomology) {
  testgen::Gen g(43);
  for (int k = 0; k < 30; ++k) {
    ModuleComplex mc = g.complex(3, 3);
    FilteredComplex c = mc.filtered();
    CohomologyDims h = ext_dims(c.underlying());
    for (int n = c.min_deg - 1; n <= c.max_deg() + 1; ++n) {
      FilteredComplex le = truncate(c, TruncMode::LE, n), ge = truncate(c, TruncMode::GE, n);
      le.check();
      ge.check();
      CohomologyDims hl = ext_dims(le.underlying()), hg = ext_dims(ge.underlying());
      for (int j = c.min_deg - 1; j <= c.max_deg() + 1; ++j) {
        EXPECT_EQ(hl.at(j), j <= n ? h.at(j) : 0u);
        EXPECT_EQ(hg.at(j), j >= n ? h.at(j) : 0u);
      }
    }
  }
}

TEST(Filtered, CohomologyObject) {
  FilteredComplex zero_d{0, {FilteredSpace::trivial(1), line_jump(2, Vec{1, 1}, 1)}, {Mat(2, 1)}};
  EXPECT_TRUE(cohomology_object(zero_d, 1).space == line_jump(2, Vec{1, 1}, 1));
  long p = 5;
  FilteredComplex mult{0, {FilteredSpace::trivial(1), FilteredSpace::trivial(1)}, {Mat{{Rat(p)}}}};
  EXPECT_EQ(cohomology_object(mult, 0).space.dim(), 0u);
  EXPECT_EQ(cohomology_object(mult, 1).space.dim(), 0u);
}

TEST(Filtered, FilteredQuasiIso) {
  FilteredComplex a{0, {FilteredSpace::trivial(1)}, {}};
  FilteredChainMap id{0, {Mat::identity(1)}};
  EXPECT_TRUE(is_quasi_iso_filtered(id, a, a));
  FilteredComplex z{0, {FilteredSpace::trivial(1)}, {}};
  FilteredChainMap zero{0, {Mat(1, 1)}};
  EXPECT_FALSE(is_quasi_iso_filtered(zero, a, z));
  // jump at 1 mapped to jump at 0: underlying iso, graded pieces differ
  FilteredComplex hi{0, {FilteredSpace::trivial(1, 1)}, {}};
  EXPECT_FALSE(is_quasi_iso_filtered(id, hi, a));
}
