#include "hodgeforge/fixtures.hpp"
#include "hodgeforge/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace hodgeforge;
using hodgeforge::io::json;
namespace fx = hodgeforge::fixtures;

namespace {
constexpr long P = 5;
using Ints = std::vector<int>;

json load(const std::string& name) { return io::read_file(std::string(FIXTURE_DIR) + "/" + name + ".json"); }

struct ModuleCase {
  std::string file;
  FilteredPhiNModule object;
  Ints h_st;
  std::string verdict;
};

struct ComplexCase {
  std::string file;
  ModuleComplex object;
  std::optional<LefschetzData> lefschetz;
  Ints cohomology;
  bool degenerate;
  int converged_at;
  Ints primitive;
};

template <class M>
Ints as_ints(const M& m, int lo, int hi) {
  Ints out;
  for (int n = lo; n <= hi; ++n) out.push_back(m.count(n) ? static_cast<int>(m.at(n)) : 0);
  return out;
}
}  // namespace

TEST(FixtureCorpus, Modules) {
  const std::vector<ModuleCase> cases{
      {"unit", fx::unit(P), {1, 1, 0}, "Admissible"},
      {"qp-2", qp(P, -2), {0, 0, 0}, "Admissible"},
      {"qp-1", qp(P, -1), {0, 0, 0}, "Admissible"},
      {"qp0", qp(P, 0), {1, 1, 0}, "Admissible"},
      {"qp1", qp(P, 1), {0, 2, 1}, "Admissible"},
      {"qp2", qp(P, 2), {0, 1, 0}, "Admissible"},
      {"unramified", fx::unramified(P, 2), {0, 0, 0}, "Admissible"},
      {"tate_curve", fx::tate_curve(P, 1), {1, 1, 0}, "Admissible"},
      {"good_ordinary_elliptic", fx::good_ordinary_elliptic(P), {0, 0, 0}, "Admissible"},
      {"bad_jump", fx::bad_jump(P), {1, 1, 0}, "NotAdmissible: t_N=0 < t_H=1"},
  };
  for (const auto& c : cases) {
    SCOPED_TRACE(c.file);
    json j = load(c.file);
    FilteredPhiNModule m = io::module_from(j);
    EXPECT_TRUE(m == c.object);
    Ints h;
    for (auto x : h_st(m)) h.push_back(static_cast<int>(x));
    EXPECT_EQ(h, c.h_st);
    EXPECT_EQ(is_weakly_admissible(m).str(), c.verdict);
    EXPECT_EQ(j["expected"]["h_st"].get<Ints>(), c.h_st);
    EXPECT_EQ(j["expected"]["admissibility"].get<std::string>(), c.verdict);
  }
}

TEST(FixtureCorpus, Complexes) {
  const std::vector<ComplexCase> cases{
      {"elliptic_complex", fx::elliptic_complex(P, 1), fx::elliptic_lefschetz(), {1, 2, 1}, true, 2, {1, 2, 0}},
      {"nonformal_complex", fx::nonformal_complex(P, 1), std::nullopt, {1, 1}, false, 3, {}},
      {"lefschetz_surface_complex", fx::lefschetz_surface_complex(P), fx::lefschetz_surface_lefschetz(),
       {1, 0, 2, 0, 1}, true, 2, {1, 0, 1, 0, 0}},
  };
  for (const auto& c : cases) {
    SCOPED_TRACE(c.file);
    json j = load(c.file);
    io::ComplexFile f = io::complex_from(j);
    EXPECT_EQ(io::dump(io::to_json(f.complex, f.lefschetz)), io::dump(io::to_json(c.object, c.lefschetz)));
    DegenerationReport d = check_degeneration(f.complex, f.lefschetz);
    const int hi = f.complex.max_deg();
    EXPECT_EQ(as_ints(d.cohomology, 0, hi), c.cohomology);
    EXPECT_EQ(d.degenerate, c.degenerate);
    EXPECT_EQ(d.ss.converged_at, c.converged_at);
    EXPECT_TRUE(d.lefschetz_ok) << d.lefschetz_failure;
    const json& e = j["expected"];
    EXPECT_EQ(e["cohomology"].get<Ints>(), c.cohomology);
    EXPECT_EQ(e["degenerate"].get<bool>(), c.degenerate);
    EXPECT_EQ(e["converged_at"].get<int>(), c.converged_at);
    if (c.lefschetz) {
      EXPECT_EQ(as_ints(d.primitive, 0, hi), c.primitive);
      EXPECT_EQ(e["primitive"].get<Ints>(), c.primitive);
    } else {
      EXPECT_FALSE(e.contains("primitive"));
    }
  }
}

TEST(FixtureCorpus, EveryFileIsCovered) {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(FIXTURE_DIR))
    if (entry.path().extension() == ".json") ++n;
  EXPECT_EQ(n, 13u);
}

// Each cohomology module of a fixture complex is admissible.
TEST(FixtureCorpus, ComplexCohomologyIsAdmissible) {
  for (const auto* name : {"elliptic_complex", "nonformal_complex", "lefschetz_surface_complex"}) {
    SCOPED_TRACE(name);
    PadicHodgeComplex th = io::as_ph(load(name));
    PHAdmissibility a = is_admissible_pH(th);
    EXPECT_TRUE(a.admissible);
  }
}
