// Writes the fixture corpus. Expected values below are hand-derived and
// re-checked by tests/test_fixtures.cpp.

#include "hodgeforge/fixtures.hpp"
#include "hodgeforge/io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace hodgeforge;
using io::json;

namespace {

constexpr long P = 5;

void write(const std::filesystem::path& dir, const std::string& name, json j, const std::string& test, json expected) {
  j["comment"] = "expected values re-derived by " + test + " in tests/test_fixtures.cpp";
  j["expected"] = std::move(expected);
  std::ofstream out(dir / (name + ".json"));
  out << io::dump(j);
}

json module_expect(std::vector<int> h, const std::string& verdict) { return {{"h_st", h}, {"admissibility", verdict}}; }

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);
  namespace fx = fixtures;

  write(dir, "unit", io::to_json(fx::unit(P)), "FixtureCorpus.Modules", module_expect({1, 1, 0}, "Admissible"));
  const std::vector<std::vector<int>> qp_h{{0, 0, 0}, {0, 0, 0}, {1, 1, 0}, {0, 2, 1}, {0, 1, 0}};
  for (int r = -2; r <= 2; ++r)
    write(dir, "qp" + std::to_string(r), io::to_json(qp(P, r)), "FixtureCorpus.Modules",
          module_expect(qp_h[r + 2], "Admissible"));
  write(dir, "unramified", io::to_json(fx::unramified(P, 2)), "FixtureCorpus.Modules",
        module_expect({0, 0, 0}, "Admissible"));
  write(dir, "tate_curve", io::to_json(fx::tate_curve(P, 1)), "FixtureCorpus.Modules",
        module_expect({1, 1, 0}, "Admissible"));
  write(dir, "good_ordinary_elliptic", io::to_json(fx::good_ordinary_elliptic(P)), "FixtureCorpus.Modules",
        module_expect({0, 0, 0}, "Admissible"));
  write(dir, "bad_jump", io::to_json(fx::bad_jump(P)), "FixtureCorpus.Modules",
        module_expect({1, 1, 0}, "NotAdmissible: t_N=0 < t_H=1"));

  write(dir, "elliptic_complex", io::to_json(fx::elliptic_complex(P, 1), fx::elliptic_lefschetz()),
        "FixtureCorpus.Complexes",
        {{"cohomology", {1, 2, 1}}, {"degenerate", true}, {"converged_at", 2}, {"primitive", {1, 2, 0}}});
  write(dir, "nonformal_complex", io::to_json(fx::nonformal_complex(P, 1)), "FixtureCorpus.Complexes",
        {{"cohomology", {1, 1}}, {"degenerate", false}, {"converged_at", 3}});
  write(dir, "lefschetz_surface_complex",
        io::to_json(fx::lefschetz_surface_complex(P), fx::lefschetz_surface_lefschetz()), "FixtureCorpus.Complexes",
        {{"cohomology", {1, 0, 2, 0, 1}}, {"degenerate", true}, {"converged_at", 2}, {"primitive", {1, 0, 1, 0, 0}}});
  std::cout << "wrote fixtures to " << dir.string() << "\n";
  return 0;
}
