// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.

#include "hodgeforge/fixtures.hpp"
#include "hodgeforge/io.hpp"
#include "oracle.hpp"
#include "random_objects.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace hodgeforge;
namespace fx = hodgeforge::fixtures;
using testgen::Gen;

namespace {

constexpr long P = 5;
using Dims = std::vector<std::size_t>;

struct Failures {
  std::vector<std::string> list;
  template <class... T>
  void add(const T&... parts) {
    std::ostringstream s;
    (s << ... << parts);
    list.push_back(s.str());
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) list.push_back(what);
  }
};

std::string show(const Dims& d) {
  std::string s = "(";
  for (std::size_t k = 0; k < d.size(); ++k) s += (k ? "," : "") + std::to_string(d[k]);
  return s + ")";
}

Dims range(const CohomologyDims& h, int lo, int hi) { return h.range(lo, hi); }

std::vector<std::filesystem::path> fixture_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(FIXTURE_DIR))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

Vec random_vec(Gen& g, std::size_t n) { return g.matrix(n, 1).col(0); }

// ---------------------------------------------------------------------------

void c1(Failures& f) {
  PhiNModule u = PhiNModule::unit(P);
  Dims h = range(ext_dims(hom_sharp_phiN(u, u)), 0, 2);
  f.expect(h == Dims{1, 1, 0}, "Hom♯_{φ,N}(1,1) = " + show(h));
  f.expect(h == oracle::hom_sharp_phiN_dims(u, u), "oracle disagrees on Hom♯_{φ,N}(1,1)");
  PhiModule one{P, Mat::identity(1)};
  Dims hp = range(ext_dims(hom_sharp_phi(one, one)), 0, 1);
  f.expect(hp == Dims{1, 1}, "Hom♯_φ(1,1) = " + show(hp));
  f.expect(hp == oracle::hom_sharp_phi_dims(u, u), "oracle disagrees on Hom♯_φ(1,1)");
  Gen g(101);
  for (int k = 0; k < 20; ++k) {
    PhiNModule a = g.phin(g.uniform(1, 2), true, false), b = g.phin(g.uniform(1, 2), true, false);
    if (range(ext_dims(hom_sharp_phiN(a, b)), 0, 2) != oracle::hom_sharp_phiN_dims(a, b))
      f.add("random pair ", k, ": Hom♯_{φ,N} differs from oracle");
    if (range(ext_dims(hom_sharp_phi(PhiModule{P, a.phi}, PhiModule{P, b.phi})), 0, 1) != oracle::hom_sharp_phi_dims(a, b))
      f.add("random pair ", k, ": Hom♯_φ differs from oracle");
  }
}

void c2(Failures& f) {
  auto flat = [](const FilteredPhiNModule& a, const FilteredPhiNModule& b) {
    return range(ext_dims(hom_flat(a, b).cx), 0, 2);
  };
  FilteredPhiNModule u = fx::unit(P), q1 = qp(P, 1);
  f.expect(flat(u, u) == Dims{1, 1, 0}, "Hom♭(1,1) = " + show(flat(u, u)));
  f.expect(flat(u, q1) == Dims{0, 2, 1}, "Hom♭(1,Q_p(1)) = " + show(flat(u, q1)));
  f.expect(flat(u, u) == oracle::hom_flat_dims(u, u), "oracle disagrees on Hom♭(1,1)");
  f.expect(flat(u, q1) == oracle::hom_flat_dims(u, q1), "oracle disagrees on Hom♭(1,Q_p(1))");
  Gen g(202);
  for (int k = 0; k < 100; ++k) {
    FilteredPhiNModule d = g.module(g.uniform(1, 4), true, false);
    Dims h = flat(u, d);
    long chi = static_cast<long>(h[0]) - static_cast<long>(h[1]) + static_cast<long>(h[2]);
    long expect = static_cast<long>(d.fil.F(0).dim()) - static_cast<long>(d.dim());
    if (chi != expect) f.add("module ", k, ": χ = ", chi, ", dim F^0 − dim D = ", expect);
    if (h != oracle::hom_flat_dims(u, d)) f.add("module ", k, ": ", show(h), " vs oracle ", show(oracle::hom_flat_dims(u, d)));
  }
}

void c3(Failures& f) {
  for (int r = -2; r <= 2; ++r) {
    AdmissibilityVerdict v = is_weakly_admissible(qp(P, r));
    if (v.status != AdmStatus::Admissible) f.add("Q_p(", r, "): ", v.str());
  }
  AdmissibilityVerdict bad = is_weakly_admissible(fx::bad_jump(P));
  f.expect(bad.status == AdmStatus::NotAdmissible, "(t_N,t_H) = (0,1) example: " + bad.str());
  f.expect(bad.witness.has_value() && bad.witness_t_N == 0 && bad.witness_t_H == 1,
           "(t_N,t_H) = (0,1) example: missing or wrong witness");
  AdmissibilityVerdict tate = is_weakly_admissible(fx::tate_curve(P, 1));
  f.expect(tate.status == AdmStatus::Admissible, "Tate curve: " + tate.str());
  f.expect(tate.subobjects_checked == 1, "Tate curve: scanned " + std::to_string(tate.subobjects_checked) +
                                             " proper subobjects, expected the single φ,N-stable line");
}

void c4(Failures& f) {
  Gen g(404);
  for (int k = 0; k < 50; ++k) {
    FilteredPhiNModule m = g.admissible_upto(3), n = g.admissible_upto(3);
    CohomologyDims a = ext_dims(hom_complex_pH(theta(m), theta(n)).cx);
    CohomologyDims b = ext_dims(hom_flat(m, n).cx);
    if (!same_cohomology(a, b))
      f.add("pair ", k, " (dims ", m.dim(), ",", n.dim(), "): ", show(a.range(-1, 3)), " vs ", show(b.range(-1, 3)));
  }
}

void c5(Failures& f) {
  auto compare = [&](const PadicHodgeComplex& m, int r, const std::string& label) {
    SyntomicResult cone = syntomic_cohomology(m, r);
    CohomologyDims direct = ext_dims(hom_complex_pH(unit_pH(m.p()), tate_twist_pH(m, r)).cx);
    if (!same_cohomology(cone.dims, direct)) f.add(label, " r=", r, ": cone ", show(cone.dims.range(-1, 5)),
                                                   " direct ", show(direct.range(-1, 5)));
  };
  for (const auto& path : fixture_files()) {
    PadicHodgeComplex m = io::as_ph(io::read_file(path.string()));
    for (int r = -1; r <= 2; ++r) compare(m, r, path.stem().string());
  }
  Gen g(505);
  for (int k = 0; k < 100; ++k) {
    int r = g.uniform(-1, 2);
    if (k % 2 == 0)
      compare(theta(g.admissible_upto(3)), r, "random module " + std::to_string(k));
    else
      compare(theta(g.complex(3, 2)), r, "random complex " + std::to_string(k));
  }
}

void c6(Failures& f) {
  Gen g(606);
  for (int k = 0; k < 30; ++k) {
    PadicHodgeComplex m = testgen::random_ph(g, 2, 2), n = testgen::random_ph(g, 2, 2);
    PadicHodgeComplex t = tensor_pH(m, n);
    PHReport v = validate_pH(t);
    if (!v.ok) {
      f.add("pair ", k, ": tensor product invalid: ", v.violation);
      continue;
    }
    for (const auto& [side_m, side_n, side_t, label] :
         {std::tuple{m.zero_side(), n.zero_side(), t.zero_side(), "zero side"},
          std::tuple{m.dr_side(), n.dr_side(), t.dr_side(), "de Rham side"}}) {
      CohomologyDims hm = ext_dims(side_m), hn = ext_dims(side_n), ht = ext_dims(side_t);
      for (int d = -6; d <= 8; ++d) {
        std::size_t conv = 0;
        for (int i = -4; i <= 5; ++i) conv += hm.at(i) * hn.at(d - i);
        if (ht.at(d) != conv) f.add("pair ", k, " ", label, " H^", d, ": ", ht.at(d), " vs convolution ", conv);
      }
    }
  }
}

void c7(Failures& f) {
  Gen g(707);
  for (int k = 0; k < 100; ++k) {
    ModuleComplex d = g.complex(3, 3);
    int r = g.uniform(-1, 1);
    SpectralSequenceReport s = descent_ss(d, r);
    CohomologyDims target = syntomic_cohomology(theta(d), r).dims;
    for (int n = d.min_deg - 1; n <= d.max_deg() + 3; ++n) {
      std::size_t tot = 0;
      for (const auto& [ij, dim] : s.e_infinity)
        if (ij.first + ij.second == n) tot += dim;
      if (tot != target.at(n)) f.add("complex ", k, " H^", n, ": Σ E_∞ = ", tot, ", syntomic ", target.at(n));
    }
  }
  for (int k = 0; k < 30; ++k) {
    FilteredPhiNModule m = g.admissible_upto(3);
    for (int r = -1; r <= 2; ++r) {
      SpectralSequenceReport s = descent_ss(ModuleComplex::single(m), r);
      if (s.converged_at != 2) f.add("one-row input ", k, " r=", r, ": converged at E_", s.converged_at);
    }
  }
}

void c8(Failures& f) {
  io::ComplexFile ell = io::complex_from(io::read_file(std::string(FIXTURE_DIR) + "/elliptic_complex.json"));
  f.expect(ell.lefschetz.has_value(), "elliptic fixture has no Lefschetz map");
  DegenerationReport e = check_degeneration(ell.complex, ell.lefschetz);
  f.expect(e.lefschetz_ok, "elliptic: Lefschetz check failed: " + e.lefschetz_failure);
  f.expect(e.degenerate, "elliptic: no E_2 degeneration, converged at E_" + std::to_string(e.ss.converged_at));
  io::ComplexFile nf = io::complex_from(io::read_file(std::string(FIXTURE_DIR) + "/nonformal_complex.json"));
  DegenerationReport n = check_degeneration(nf.complex, nf.lefschetz);
  f.expect(!n.degenerate, "non-Lefschetz counterexample degenerates at E_2");
}

void c9(Failures& f) {
  for (const auto& path : fixture_files()) {
    io::json j = io::read_file(path.string());
    if (io::kind_of(j) != "module") continue;
    FilteredPhiNModule d = io::module_from(j);
    Dims c = range(ext_dims(c_pst(d).cx), 0, 2);
    if (c != h_st(d)) f.add(path.stem().string(), ": C_pst ", show(c), " vs Hom♭ ", show(h_st(d)));
  }
  Mat e = exp_bk(qp(P, 1));
  f.expect(e.rows() == 2, "exp on Q_p(1): H^1 has dimension " + std::to_string(e.rows()));
  f.expect(e.cols() == 1 && rank(e) == 1, "exp on Q_p(1) is not injective with 1-dim image");
  Gen g(909);
  for (int k = 0; k < 100; ++k) {
    CPstComplex c = c_pst(g.module(g.uniform(1, 3)));
    if (!(c.d1() * c.d0()).is_zero()) f.add("module ", k, ": d1 d0 ≠ 0");
  }
}

void c10(Failures& f) {
  Gen g(1010);
  int nonzero = 0, attempts = 0;
  while (nonzero < 100 && attempts < 2000) {
    ++attempts;
    FilteredPhiNModule x = g.admissible(1), y = g.admissible(g.uniform(1, 2));
    FilteredPhiNModule a = direct_sum(x, y), b = direct_sum(x, g.admissible(g.uniform(1, 2)));
    if (a.dim() > 3 || b.dim() > 3) continue;
    a = change_basis(a, g.invertible(a.dim()), g.invertible(a.dim()));
    Mat m = testgen::random_combination(g, testgen::morphism_basis(a, b), b.dim(), a.dim());
    if (m.is_zero()) continue;
    ++nonzero;
    if (!is_morphism(a, b, m)) f.add("morphism ", nonzero, ": generator produced a non-morphism");
    else if (!kernel_cokernel(a, b, m).strict) f.add("morphism ", nonzero, ": not strict");
  }
  if (nonzero < 100) f.add("only ", nonzero, " nonzero morphisms generated");
}

void c11(Failures& f) {
  Gen g(1111);
  int checked = 0;
  auto dd = [&](const ChainComplex& c, const std::string& label) {
    ++checked;
    if (!c.is_complex()) f.add(label, ": d∘d ≠ 0");
  };
  for (int k = 0; k < 40; ++k) {
    std::string s = std::to_string(k);
    ModuleComplex d = g.complex(3, 3);
    dd(d.underlying(), "module complex " + s);
    PadicHodgeComplex m = testgen::random_ph(g, 3, 2), n = testgen::random_ph(g, 2, 2);
    dd(m.zero_side(), "pH zero side " + s);
    dd(m.dr_side(), "pH de Rham side " + s);
    dd(hom_complex_pH(m, n).cx, "pH Hom " + s);
    dd(tensor_pH(m, n).zero_side(), "tensor " + s);
    dd(syntomic_cohomology(m, g.uniform(-1, 1)).complex, "syntomic cone " + s);
    FilteredPhiNModule a = g.module(g.uniform(1, 3)), b = g.module(g.uniform(1, 2));
    dd(hom_flat(a, b).cx, "Hom♭ " + s);
    dd(hom_sharp_phiN(a.base, b.base), "Hom♯ " + s);
    dd(c_pst(a).cx, "C_pst " + s);
  }
  for (int k = 0; k < 12; ++k) {
    PadicHodgeComplex a = testgen::random_ph(g, 2, 2), b = testgen::random_ph(g, 2, 2), c = testgen::random_ph(g, 2, 2);
    PHHomComplex bc = hom_complex_pH(b, c), ab = hom_complex_pH(a, b), ac = hom_complex_pH(a, c);
    for (int i = bc.cx.min_deg; i <= bc.cx.max_deg(); ++i)
      for (int j = ab.cx.min_deg; j <= ab.cx.max_deg(); ++j) {
        if (ac.cx.dim(i + j) == 0) continue;
        Vec x = random_vec(g, bc.cx.dim(i)), y = random_vec(g, ab.cx.dim(j));
        Vec lhs = ac.cx.diff(i + j) * compose_pH(bc, x, i, ab, y, j, ac);
        Vec r1 = compose_pH(bc, bc.cx.diff(i) * x, i + 1, ab, y, j, ac);
        Vec r2 = compose_pH(bc, x, i, ab, ab.cx.diff(j) * y, j + 1, ac);
        Rat sign = (i % 2 == 0) ? 1 : -1;
        for (std::size_t t = 0; t < lhs.size(); ++t)
          if (lhs[t] != r1[t] + sign * r2[t]) {
            f.add("Leibniz fails for triple ", k, " in degrees ", i, ",", j);
            break;
          }
      }
  }
  if (checked == 0) f.add("no complexes generated");
}

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<void(Failures&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "Hom♯ engine", 1, c1},
      {2, "Hom♭ Ext dims and Euler identity", 10, c2},
      {3, "admissibility examples", 5, c3},
      {4, "θ-equivalence on Ext dims", 30, c4},
      {5, "syntomic cone vs direct Hom", 30, c5},
      {6, "Künneth", 10, c6},
      {7, "spectral sequence abutment and one-row degeneration", 60, c7},
      {8, "E_2 degeneration examples", 5, c8},
      {9, "C_pst and the exponential", 10, c9},
      {10, "strictness of morphisms of admissible modules", 30, c10},
      {11, "d∘d = 0 and the Leibniz rule", 10, c11},
  };
  int failed = 0;
  for (const auto& c : all) {
    Failures f;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(f);
    } catch (const std::exception& e) {
      f.add("exception: ", e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) f.add("took ", secs, " s, limit ", c.limit_s, " s");
    bool ok = f.list.empty();
    failed += ok ? 0 : 1;
    std::printf("[%s] %d: %s (%.2f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, c.limit_s);
    for (std::size_t k = 0; k < f.list.size() && k < 10; ++k) std::printf("    %s\n", f.list[k].c_str());
    if (f.list.size() > 10) std::printf("    ... %zu more\n", f.list.size() - 10);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
