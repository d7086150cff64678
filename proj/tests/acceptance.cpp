// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "fflab/additive.hpp"
#include "fflab/expander.hpp"
#include "fflab/experiment.hpp"
#include "fflab/extractor.hpp"
#include "fflab/incidence.hpp"

using namespace fflab;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL",
              what.c_str());
  if (!ok) ++failures;
}

std::vector<FpSet> subsets_up_to(const PrimeField& F, std::uint64_t maxSize) {
  std::vector<FpSet> out;
  for (std::uint64_t mask = 1; mask < (1ull << F.p()); ++mask) {
    if (static_cast<std::uint64_t>(std::popcount(mask)) > maxSize) continue;
    FpSet s(F);
    for (std::uint64_t i = 0; i < F.p(); ++i)
      if (mask >> i & 1) s.insert(i);
    out.push_back(std::move(s));
  }
  return out;
}

MapSpec spec_quad() {
  return monomial_spec(2, {{1, {2, 0, 0}}, {1, {1, 1, 0}}});
}
MapSpec spec_sum() {
  return monomial_spec(2, {{1, {1, 0, 0}}, {1, {0, 1, 0}}});
}

// --- 1. Cauchy-Davenport, exhaustive over F_7 ------------------------------
void criterion1() {
  const PrimeField F(7);
  const auto subsets = subsets_up_to(F, 7);
  const MapSpec add = spec_sum();
  std::uint64_t pairs = 0, violations = 0;
  for (const auto& A : subsets)
    for (const auto& B : subsets) {
      ++pairs;
      if (image_set(add, A, B).size() <
          std::min<std::uint64_t>(7, A.size() + B.size() - 1))
        ++violations;
    }
  report(1, pairs == 16129 && violations == 0,
         "Cauchy-Davenport over F_7 (" + std::to_string(pairs) + " pairs, " +
             std::to_string(violations) + " violations)");
}

// --- 2. Cauchy-Schwarz chain ------------------------------------------------
void criterion2() {
  const std::vector<MapSpec> pool = {
      spec_quad(), monomial_spec(2, {{1, {3, 0, 0}}, {1, {1, 1, 0}}}),
      monomial_spec(2, {{1, {1, 0, 0}}, {1, {2, 2, 0}}})};
  std::uint64_t checked = 0, bad = 0;
  for (std::uint64_t p : {5ull, 7ull}) {
    const PrimeField F(p);
    const auto subsets = subsets_up_to(F, 4);
    for (const auto& spec : pool)
      for (const auto& A : subsets)
        for (const auto& B : subsets) {
          const auto r = representation_counts(spec, A, B);
          std::uint64_t sum = 0, sumsq = 0;
          for (std::uint64_t z = 0; z < p; ++z) {
            sum += r[z];
            sumsq += r[z] * r[z];
          }
          ++checked;
          if (sum != A.size() * B.size() ||
              sumsq != collision_energy(spec, A, B) ||
              cs_lower_bound(A.size(), B.size(), sumsq) >
                  image_set(spec, A, B).size())
            ++bad;
        }
  }
  report(2, bad == 0,
         "Cauchy-Schwarz chain (" + std::to_string(checked) +
             " instances, " + std::to_string(bad) + " violations)");
}

// --- 3. Vinh inequality ------------------------------------------------------
void criterion3() {
  std::uint64_t instances = 0, bad = 0;
  double maxRatio = 0.0;
  for (std::uint64_t p : {5ull, 7ull, 11ull, 13ull})
    for (int d : {2, 3}) {
      const PrimeField F(p);
      SplitMix64 rng(p * 10 + d);
      for (int inst = 0; inst < 500; ++inst) {
        PointSet P(F, d);
        HyperplaneSet H(F, d);
        const int n = 1 + int(rng.below(25));
        for (int i = 0; i < n; ++i) {
          Point pt(d);
          for (auto& x : pt) x = rng.below(p);
          P.insert(std::move(pt));
          std::vector<std::uint64_t> a(d);
          std::uint64_t any = 0;
          for (auto& x : a) any |= (x = rng.below(p));
          if (!any) a[0] = 1;
          H.insert(a, rng.below(p));
        }
        ++instances;
        const IncidenceResult r = incidence_count(P, H);
        const double bound = r.vinhMain + r.vinhError;
        if (double(r.count) > bound) ++bad;
        if (bound > 0) maxRatio = std::max(maxRatio, double(r.count) / bound);
      }
    }
  // full-grid instance at p = 5
  const PrimeField F5(5);
  PointSet P(F5, 2);
  HyperplaneSet H(F5, 2);
  for (std::uint64_t x = 0; x < 5; ++x)
    for (std::uint64_t y = 0; y < 5; ++y) {
      P.insert({x, y});
      H.insert_line_slope(x, y);
    }
  const IncidenceResult grid = incidence_count(P, H);
  const bool gridOk =
      grid.count == 125 && 125.0 <= grid.vinhMain + grid.vinhError &&
      std::abs(grid.vinhMain + grid.vinhError - 180.9) < 0.1;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max N/bound %.4f", maxRatio);
  report(3, bad == 0 && gridOk && instances == 4000,
         "Vinh constant-1 check (" + std::to_string(instances) +
             " instances, " + std::to_string(bad) + " violations, " + buf +
             ", grid 125 <= 180.9)");
}

// --- 4. Moment bounds --------------------------------------------------------
void criterion4() {
  std::uint64_t bad = 0, checked = 0;
  const std::vector<IntPoly> gs = {IntPoly{0, 0, 1}, IntPoly{0, 0, 0, 1},
                                   IntPoly{0, 1, 1}};
  for (std::uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
    const PrimeField F(p);
    const auto subsets = subsets_up_to(F, 6);
    for (const auto& g : gs) {
      if (g.degree_mod(F) < 2) continue;
      for (const auto& B : subsets) {
        const NuCensus c = nu_census(g, B);
        // brute second moment of the difference system
        std::uint64_t brute = 0;
        const auto bs = B.members();
        for (auto y1 : bs)
          for (auto y2 : bs)
            for (auto z1 : bs)
              for (auto z2 : bs)
                if (F.sub(y1, y2) == F.sub(z1, z2) &&
                    F.sub(g.eval(F, y1), g.eval(F, y2)) ==
                        F.sub(g.eval(F, z1), g.eval(F, z2)))
                  ++brute;
        ++checked;
        if (c.secondMoment != brute ||
            c.secondMoment >
                std::uint64_t(g.degree_mod(F)) * B.size() * B.size())
          ++bad;
      }
    }
    for (const auto& A : subsets) {
      const MuCensus c = mu_census(A);
      const std::uint64_t n = A.size();
      ++checked;
      if (c.sumMu1Sq > 2 * n * n * n * n ||
          c.sumMu1Sq != n * n * c.pairCollisions ||
          c.pairCollisions > 2 * n * n)
        ++bad;
    }
  }
  // worked value
  const PrimeField F7(7);
  const bool worked =
      nu_census(IntPoly{0, 0, 1}, FpSet::of(F7, {0, 1, 2})).secondMoment == 15;
  report(4, bad == 0 && worked,
         "moment bounds (" + std::to_string(checked) + " censuses, " +
             std::to_string(bad) + " violations, worked value 15 " +
             (worked ? "ok" : "wrong") + ")");
}

// --- 5. Section-5 line family ------------------------------------------------
void criterion5() {
  std::uint64_t bad = 0, checked = 0;
  for (std::uint64_t p : {11ull, 101ull}) {
    const PrimeField F(p);
    for (std::uint64_t m = 2; m <= 8; ++m)
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const FpSet A = sample_subset(F, m, 100 * p + 10 * m + seed);
        const std::uint64_t t = A.members()[0];
        ++checked;
        if (lines_from_expander_pairs(A, Sec5Lines{t}).size() != m * m - m)
          ++bad;
      }
  }
  report(5, bad == 0,
         "line family |A|^2-|A| (" + std::to_string(checked) + " sets, " +
             std::to_string(bad) + " violations)");
}

// --- 6. Spectrum identities ---------------------------------------------------
void criterion6() {
  bool ok = true;
  SplitMix64 rng(6);
  for (std::uint64_t p : {7ull, 97ull, 499ull, 1009ull}) {
    const PrimeField F(p);
    const std::uint64_t m = std::min<std::uint64_t>(p, 15);
    const FpSet A = sample_subset(F, m, rng.next());
    const FpSet B = sample_subset(F, m, rng.next());
    const FpSet C = sample_subset(F, m, rng.next());
    const auto hist = extractor_histogram(ExtractorSpec{}, A, B, C);
    const SpectrumResult naive = exp_sums_naive(hist, F);
    const SpectrumResult fast = exp_sums_fast(hist, F);
    const double total = double(m) * m * m;
    if (std::abs(naive.S[0] - std::complex<double>(total, 0.0)) > 1e-6 * total)
      ok = false;
    std::uint64_t sq = 0;
    for (auto c : hist) sq += c * c;
    double parseval = 0;
    for (const auto& s : naive.S) parseval += std::norm(s);
    if (std::abs(parseval - double(p) * double(sq)) >
        1e-6 * double(p) * double(sq))
      ok = false;
    for (std::uint64_t r = 0; r < p; ++r)
      if (std::abs(naive.S[r] - fast.S[r]) >
          1e-6 * (1.0 + std::abs(naive.S[r])))
        ok = false;
  }
  report(6, ok, "spectrum identities (S_0, Parseval, naive vs fast)");
}

// --- 7. Weil / Gauss ---------------------------------------------------------
void criterion7() {
  // fixed pool of 20 polynomials of degree 2-5
  const std::vector<IntPoly> pool = {
      IntPoly{0, 0, 1},          IntPoly{1, 1, 1},
      IntPoly{0, 3, 2},          IntPoly{2, 0, 5},
      IntPoly{0, 0, 0, 1},       IntPoly{0, 2, 0, 1},
      IntPoly{1, 1, 1, 1},       IntPoly{0, 0, 3, 2},
      IntPoly{3, 0, 0, 4},       IntPoly{0, 1, 2, 3},
      IntPoly{0, 0, 0, 0, 1},    IntPoly{0, 1, 0, 0, 1},
      IntPoly{1, 0, 2, 0, 3},    IntPoly{0, 4, 0, 1, 2},
      IntPoly{2, 2, 2, 2, 2},    IntPoly{0, 0, 0, 0, 0, 1},
      IntPoly{0, 1, 0, 1, 0, 1}, IntPoly{1, 0, 0, 0, 0, 2},
      IntPoly{0, 0, 1, 0, 0, 3}, IntPoly{0, 5, 4, 3, 2, 1}};
  std::uint64_t bad = 0, checked = 0;
  for (std::uint64_t p : {11ull, 101ull, 499ull}) {
    const PrimeField F(p);
    for (const auto& f : pool) {
      if (f.degree_mod(F) < 1) continue;
      for (std::uint64_t h = 1; h < p; ++h) {
        ++checked;
        if (!weil_bound_check(f, h, F).holds) ++bad;
      }
    }
  }
  bool gauss = true;
  for (std::uint64_t p : {11ull, 101ull, 499ull}) {
    const PrimeField F(p);
    const double sp = std::sqrt(double(p));
    for (std::uint64_t h = 1; h < p; ++h)
      if (std::abs(std::abs(weil_sum(IntPoly{0, 0, 1}, h, F)) - sp) > 1e-6 * sp)
        gauss = false;
  }
  report(7, bad == 0 && gauss,
         "Weil bound (" + std::to_string(checked) + " sums, " +
             std::to_string(bad) + " violations) and Gauss magnitude");
}

// --- 8. Interval preimages ---------------------------------------------------
void criterion8() {
  std::uint64_t bad = 0, checked = 0;
  const std::vector<IntPoly> fs = {IntPoly{0, 1}, IntPoly{0, 0, 1},
                                   IntPoly{1, 2, 0, 1}, IntPoly{0, 1, 1, 0, 2}};
  for (std::uint64_t p : {11ull, 101ull}) {
    const PrimeField F(p);
    for (const auto& f : fs)
      for (std::uint64_t u = 0; u < p; ++u)
        for (std::uint64_t L = 1; 2 * L < p; ++L) {
          ++checked;
          const IntervalPreimage r = interval_preimage_count(f, u, L, F);
          if (double(r.count) + 1e-9 < r.provedBound) ++bad;
        }
  }
  const PrimeField F11(11);
  const bool worked =
      interval_preimage_count(IntPoly{0, 0, 1}, 2, 3, F11).count == 7;
  report(8, bad == 0 && worked,
         "interval preimage N >= L - k sqrt(p) (" + std::to_string(checked) +
             " sweeps) and worked value N(I)=7");
}

// --- 9. Sarkozy --------------------------------------------------------------
void criterion9() {
  std::uint64_t bad = 0, checked = 0;
  for (std::uint64_t p : {3ull, 5ull, 7ull}) {
    const PrimeField F(p);
    const auto subsets = subsets_up_to(F, 3);
    for (const auto& A : subsets)
      for (const auto& B : subsets)
        for (const auto& C : subsets)
          for (const auto& D : subsets) {
            ++checked;
            if (sarkozy_count(A, B, C, D).n !=
                sarkozy_count_brute(A, B, C, D).n)
              ++bad;
          }
  }
  SplitMix64 rng(9);
  std::uint64_t unsolvable = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    const std::uint64_t p =
        std::vector<std::uint64_t>{11, 31, 61, 101}[rng.below(4)];
    const PrimeField F(p);
    const FpSet A = sample_subset(F, 1 + rng.below(p), rng.next());
    const FpSet B = sample_subset(F, 1 + rng.below(p), rng.next());
    const FpSet C = sample_subset(F, 1 + rng.below(p), rng.next());
    const FpSet D = sample_subset(F, 1 + rng.below(p), rng.next());
    const EquationCount conv = sarkozy_count(A, B, C, D);
    ++checked;
    if (conv.n != sarkozy_count_brute(A, B, C, D).n) ++bad;
    const unsigned __int128 prod =
        (unsigned __int128)A.size() * B.size() * C.size() * D.size();
    if (prod > (unsigned __int128)p * p * p && conv.n == 0) ++unsolvable;
  }
  bool fullField = true;
  for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull}) {
    const PrimeField F(p);
    const FpSet full = FpSet::full(F);
    if (sarkozy_count(full, full, full, full).n != p * p * p)
      fullField = false;
  }
  report(9, bad == 0 && unsolvable == 0 && fullField,
         "Sarkozy conv = brute (" + std::to_string(checked) + " instances), " +
             std::to_string(unsolvable) +
             " unsolvable above p^3, full field N = p^3");
}

// --- 10. Multiplication table ------------------------------------------------
void criterion10() {
  bool ok = mult_table(1).m == 1 && mult_table(3).m == 6;
  std::set<std::uint64_t> prods;
  std::uint64_t prev = 0;
  for (std::uint64_t n = 1; n <= 512; ++n) {
    for (std::uint64_t a = 1; a <= n; ++a) {
      prods.insert(a * n);
      prods.insert(n * a);
    }
    const MultTable t = mult_table(n);
    if (t.m != prods.size() || t.m < prev) ok = false;
    prev = t.m;
  }
  const bool delta =
      std::abs(mult_table(2).tenenbaumDelta - 0.08607133205593431) < 1e-5;
  report(10, ok && delta,
         "multiplication table exact to n=512, Tenenbaum constant to 1e-5");
}

// --- 11. Expander trend ------------------------------------------------------
void criterion11() {
  const std::vector<std::uint64_t> primes = {101, 499, 1009, 4999, 10007};
  const auto quad = expansion_report(spec_quad(), 0.5, primes, 20, 1234);
  const auto add = expansion_report(spec_sum(), 0.5, primes, 20, 1234);
  const bool hasBoth = quad.kappaHat && add.kappaHat;
  const double kq = hasBoth ? *quad.kappaHat : 0.0;
  const double ka = hasBoth ? *add.kappaHat : 0.0;
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "expander trend kappa(x^2+xy)=%.3f >= 1.05, > kappa(x+y)=%.3f",
                kq, ka);
  report(11, hasBoth && kq >= 1.05 && kq > ka, buf);
}

// --- 12. Non-expander witnesses ----------------------------------------------
void criterion12() {
  std::uint64_t bad = 0, checked = 0;
  for (std::uint64_t p : {101ull, 499ull, 1009ull, 4999ull, 9973ull}) {
    const PrimeField F(p);
    for (const IntPoly& f :
         {IntPoly{0, 1}, IntPoly{0, 0, 1}, IntPoly{1, 2, 0, 1}}) {
      const WitnessSets w = non_expander_witness(f, IntPoly{0, 1}, F, 0.5);
      MapSpec fg;
      fg.arity = 2;
      MapTerm tf;
      tf.polyFactors[0] = f;
      fg.terms.push_back(tf);
      MapTerm tg;
      tg.powers = {0, 1, 0};
      fg.terms.push_back(tg);
      ++checked;
      if (image_set(fg, w.A, w.B).size() > 2 * w.intervalLen + 1) ++bad;
    }
    for (std::uint64_t L = 1;
         double(L) < std::sqrt(double(p)) / 2.0 && L <= 20; ++L) {
      const BourgainWitness w = bourgain_counterexample(2, 1, F, L);
      if (w.A.empty() || w.B.empty()) continue;
      const MapSpec spec = monomial_spec(
          2, {{1, {4, 0, 0}}, {1, {2, 0, 0}}, {1, {2, 1, 0}}});  // u = 1
      ++checked;
      if (image_set(spec, w.A, w.B).size() > mult_table(2 * L).m) ++bad;
    }
  }
  report(12, bad == 0,
         "witness containment contracts (" + std::to_string(checked) +
             " instances, " + std::to_string(bad) + " violations)");
}

// --- 13. Determinism and round-trips -----------------------------------------
void criterion13() {
  bool ok = true;
  const std::vector<std::string> configs = {
      R"({"kind":"multtable","ns":[1,3,64],"seed":0})",
      R"({"kind":"sarkozy","primes":[7,11],"instances":10,"seed":2})",
      R"({"kind":"incidence","primes":[7,11],"dims":[2,3],"instances":10,"seed":3})",
      R"({"kind":"weil","primes":[11],"polys":[[0,0,1],[0,1,2,3]],"seed":0})",
      R"({"kind":"expander","primes":[101,499],"alpha":0.5,"trials":4,"seed":5,
          "map":{"arity":2,"terms":[{"coeff":1,"powers":[2,0]},
                                    {"coeff":1,"powers":[1,1]}]}})",
      R"({"kind":"extractor","primes":[101,199],"alphas":[0.6,0.8],"trials":2,
          "seed":6,"extractor":{"a":[1],"b":[1],"g":[0,0,1]}})",
      R"({"kind":"wellspaced","primes":[101],"alpha":0.6,"instances":5,
          "seed":7,"map":{"arity":3,"terms":[{"coeff":1,"powers":[1,1,1]},
                                             {"coeff":1,"powers":[2,2,1]}]}})"};
  for (const auto& text : configs) {
    const ExperimentConfig c = parse_config(text);
    if (!(parse_config(serialize_config(c)) == c)) ok = false;
    const ExperimentReport a = run(c);
    const ExperimentReport b = run(c);
    if (report_csv(a) != report_csv(b)) ok = false;
    if (report_json(a, false) != report_json(b, false)) ok = false;
  }
  report(13, ok, "CLI config determinism and lossless round-trips");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  criterion13();
  if (failures) {
    std::printf("%d criteria FAILED\n", failures);
    return 1;
  }
  std::printf("all 13 criteria passed\n");
  return 0;
}
