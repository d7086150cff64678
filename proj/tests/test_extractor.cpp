#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "fflab/extractor.hpp"

using namespace fflab;

namespace {

// reference spec F = z*xy + z*x^2*y^2
MapSpec reference_map() {
  return monomial_spec(3, {{1, {1, 1, 1}}, {1, {2, 2, 1}}});
}

}  // namespace

TEST_CASE("ExtractorSpec validation and assembly") {
  ExtractorSpec s;
  CHECK_NOTHROW(s.validate());
  const MapSpec m = s.to_map_spec();
  CHECK(m.arity == 3);
  // default F = xy + x^2 y^2: check a few values
  const PrimeField F(7);
  CHECK(eval_map(m, F, {1, 1, 0}) == 2);  // 1 + 1
  CHECK(eval_map(m, F, {2, 3, 5}) == F.reduce(2 * 3 + 4 * 9));

  ExtractorSpec bad;
  bad.g = IntPoly{0, 1};  // degree 1
  CHECK_THROWS_AS(bad.validate(), DegenerateG);
  ExtractorSpec zero;
  zero.a = IntPoly{};
  CHECK_THROWS_AS(zero.validate(), Error);
}

TEST_CASE("value_histogram basics") {
  const PrimeField F(7);
  const FpSet one = FpSet::of(F, {3});
  auto h = value_histogram(reference_map(), one, one, one);
  std::uint64_t total = 0, nonzero = 0;
  for (auto c : h) {
    total += c;
    nonzero += c > 0;
  }
  CHECK(total == 1);
  CHECK(nonzero == 1);

  // F = x+y+z over the full field: every bin has p^2
  const MapSpec add =
      monomial_spec(3, {{1, {1, 0, 0}}, {1, {0, 1, 0}}, {1, {0, 0, 1}}});
  const FpSet full = FpSet::full(F);
  h = value_histogram(add, full, full, full);
  for (auto c : h) CHECK(c == 49);

  // 8-tuple example with A=B=C={1,2}
  const FpSet two = FpSet::of(F, {1, 2});
  h = value_histogram(reference_map(), two, two, two);
  std::uint64_t sum = 0;
  for (auto c : h) sum += c;
  CHECK(sum == 8);
}

TEST_CASE("histogram kernels agree") {
  SplitMix64 rng(3);
  for (std::uint64_t p : {7ull, 97ull, 499ull}) {
    const PrimeField F(p);
    const std::uint64_t m = std::min<std::uint64_t>(p, 12);
    const FpSet A = sample_subset(F, m, rng.next());
    const FpSet B = sample_subset(F, m, rng.next());
    const FpSet C = sample_subset(F, m, rng.next());
    ExtractorSpec spec;
    spec.a = IntPoly{0, 1};       // a(z) = z
    spec.b = IntPoly{1, 1};       // b(z) = z + 1
    spec.g = IntPoly{0, 1, 2};    // g(y) = 2y^2 + y
    const MapSpec m3 = spec.to_map_spec();
    CHECK(value_histogram(m3, A, B, C) == value_histogram_serial(m3, A, B, C));
    CHECK(value_histogram(m3, A, B, C) == extractor_histogram(spec, A, B, C));
  }
}

TEST_CASE("spectrum identities") {
  SplitMix64 rng(17);
  for (std::uint64_t p : {7ull, 97ull, 499ull, 1009ull}) {
    const PrimeField F(p);
    std::vector<std::uint64_t> hist(p, 0);
    for (std::uint64_t i = 0; i < p; ++i) hist[i] = rng.below(50);
    const SpectrumResult naive = exp_sums_naive(hist, F);
    const SpectrumResult fast = exp_sums_fast(hist, F);

    std::uint64_t total = 0, sq = 0;
    for (auto c : hist) {
      total += c;
      sq += c * c;
    }
    CHECK(naive.S[0].real() == doctest::Approx(double(total)).epsilon(1e-9));
    CHECK(std::abs(naive.S[0].imag()) < 1e-6 * (1.0 + double(total)));

    double parseval = 0;
    for (const auto& s : naive.S) parseval += std::norm(s);
    CHECK(parseval ==
          doctest::Approx(double(p) * double(sq)).epsilon(1e-6));

    for (std::uint64_t r = 0; r < p; ++r)
      CHECK(std::abs(naive.S[r] - fast.S[r]) <=
            1e-6 * (1.0 + std::abs(naive.S[r])));
  }
}

TEST_CASE("singleton spectrum has unit modulus everywhere") {
  const PrimeField F(97);
  std::vector<std::uint64_t> hist(97, 0);
  hist[13] = 1;
  const SpectrumResult s = exp_sums_all(hist, F);
  for (const auto& v : s.S)
    CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sgn_sin_sum exact paths") {
  const PrimeField F(11);
  const MapSpec x = monomial_spec(3, {{1, {1, 0, 0}}});
  const FpSet full = FpSet::full(F);
  const FpSet one = FpSet::of(F, {4});
  CHECK(sgn_sin_sum(x, full, one, one) == 0);  // symmetric cancellation

  const MapSpec zero = MapSpec{3, {}};
  CHECK(sgn_sin_sum(zero, full, full, full) == 0);

  SplitMix64 rng(23);
  for (int iter = 0; iter < 20; ++iter) {
    const FpSet A = sample_subset(F, 1 + rng.below(11), rng.next());
    const FpSet B = sample_subset(F, 1 + rng.below(11), rng.next());
    const FpSet C = sample_subset(F, 1 + rng.below(11), rng.next());
    const long long direct = sgn_sin_sum(reference_map(), A, B, C);
    const long long viaHist = sgn_sin_from_histogram(
        value_histogram(reference_map(), A, B, C), F);
    CHECK(direct == viaHist);
    CHECK(std::llabs(direct) <=
          static_cast<long long>(A.size() * B.size() * C.size()));
  }
}

TEST_CASE("nu census") {
  {
    const PrimeField F(7);
    const NuCensus c = nu_census(IntPoly{0, 0, 1}, FpSet::of(F, {0, 1, 2}));
    CHECK(c.secondMoment == 15);
    std::uint64_t total = 0;
    for (const auto& [k, v] : c.nu) total += v;
    CHECK(total == 9);
  }
  {
    const PrimeField F(13);
    const NuCensus c = nu_census(IntPoly{0, 0, 1}, FpSet::of(F, {5}));
    CHECK(c.secondMoment == 1);
  }
  // brute-force oracle for the (5.5)-style system, exhaustive small sweeps
  for (std::uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
    const PrimeField F(p);
    for (const IntPoly& g :
         {IntPoly{0, 0, 1}, IntPoly{0, 0, 0, 1}, IntPoly{0, 1, 1}}) {
      if (g.degree_mod(F) < 2) continue;
      SplitMix64 rng(p);
      for (int iter = 0; iter < 4; ++iter) {
        const std::uint64_t m = 1 + rng.below(std::min<std::uint64_t>(6, p));
        const FpSet B = sample_subset(F, m, rng.next());
        const NuCensus c = nu_census(g, B);
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
        CHECK(c.secondMoment == brute);
        CHECK(c.secondMoment <=
              std::uint64_t(g.degree_mod(F)) * B.size() * B.size());
      }
    }
  }
  const PrimeField F(7);
  CHECK_THROWS_AS(nu_census(IntPoly{0, 1}, FpSet::of(F, {1})), DegenerateG);
}

TEST_CASE("mu census") {
  {
    const PrimeField F(7);
    const MuCensus c = mu_census(FpSet::of(F, {3}));
    CHECK(c.total == 1);
    CHECK(c.mu.at(0) == 1);  // key (0,0)
  }
  {
    const PrimeField F(7);
    const MuCensus c = mu_census(FpSet::of(F, {0, 1}));
    CHECK(c.total == 16);
    // oracle by 16-tuple enumeration
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> oracle;
    const std::uint64_t xs[] = {0, 1};
    for (auto x1 : xs)
      for (auto x2 : xs)
        for (auto x3 : xs)
          for (auto x4 : xs) {
            const std::uint64_t xi1 =
                F.add(F.sub(x1, x2), F.sub(x3, x4));
            const std::uint64_t xi2 =
                F.add(F.sub(F.mul(x1, x1), F.mul(x2, x2)),
                      F.sub(F.mul(x3, x3), F.mul(x4, x4)));
            ++oracle[{xi1, xi2}];
          }
    for (const auto& [k, v] : oracle)
      CHECK(c.mu.at(k.first * 7 + k.second) == v);
  }
  // identities on random sets
  SplitMix64 rng(9);
  for (std::uint64_t p : {7ull, 11ull, 13ull}) {
    const PrimeField F(p);
    for (int iter = 0; iter < 5; ++iter) {
      const FpSet A =
          sample_subset(F, 1 + rng.below(std::min<std::uint64_t>(6, p)),
                        rng.next());
      const MuCensus c = mu_census(A);
      const std::uint64_t n = A.size();
      std::uint64_t sumMu = 0;
      for (const auto& [k, v] : c.mu) sumMu += v;
      CHECK(sumMu == n * n * n * n);
      for (const auto& [k, v] : c.mu)
        CHECK(v == (c.mu1.count(k) ? c.mu1.at(k) : 0) +
                       (c.mu2.count(k) ? c.mu2.at(k) : 0));
      CHECK(c.sumMu1Sq == n * n * c.pairCollisions);
      CHECK(c.pairCollisions <= 2 * n * n);
      CHECK(c.sumMu1Sq <= 2 * n * n * n * n);
    }
  }
}

TEST_CASE("mu(.,t) second moment via two paths") {
  {
    const PrimeField F(11);
    const FpSet A = FpSet::of(F, {4});
    const MuTSecondMoment m = mu_t_second_moment(A, 4);
    CHECK(m.value == 1);
    CHECK(m.viaLines == 1);
  }
  {
    const PrimeField F(11);
    const FpSet A = FpSet::of(F, {0, 1, 2});
    const MuTSecondMoment m = mu_t_second_moment(A, 0);
    CHECK(m.value == m.viaLines);
    CHECK(m.maxMu <= 2 * A.size());  // C_k empty for k > 2|A|
  }
  SplitMix64 rng(41);
  for (int iter = 0; iter < 10; ++iter) {
    const PrimeField F(13);
    const FpSet A = sample_subset(F, 1 + rng.below(6), rng.next());
    const std::uint64_t t = A.members()[rng.below(A.size())];
    const MuTSecondMoment m = mu_t_second_moment(A, t);
    CHECK(m.value == m.viaLines);
    CHECK(m.maxMu <= 2 * A.size());
  }
}

TEST_CASE("entropy scan shape, determinism, normalization") {
  ExtractorSpec spec;
  const auto scan =
      entropy_scan(spec, {0.6, 0.8}, {101, 199}, 2, 5);
  CHECK(scan.rows.size() == 2 * 2 * 2);
  for (const auto& r : scan.rows) {
    CHECK(r.maxNontrivialNorm >= 0.0);
    CHECK(r.maxNontrivialNorm <= 1.0 + 1e-9);
    CHECK(r.sgnSinNorm >= 0.0);
    CHECK(r.sgnSinNorm <= 1.0 + 1e-9);
  }
  CHECK(scan.epsilonHat.size() == 2);
  const auto scan2 = entropy_scan(spec, {0.6, 0.8}, {101, 199}, 2, 5);
  for (std::size_t i = 0; i < scan.rows.size(); ++i)
    CHECK(scan.rows[i].maxNontrivialNorm ==
          scan2.rows[i].maxNontrivialNorm);
}

TEST_CASE("full-set bias at alpha near 1") {
  // h = 0, full sets, a(z) = b(z) = z: normalized nontrivial bias is small
  for (std::uint64_t p : {101ull, 499ull}) {
    const PrimeField F(p);
    const FpSet full = FpSet::full(F);
    ExtractorSpec spec;
    spec.a = IntPoly{0, 1};
    spec.b = IntPoly{0, 1};
    const auto hist = extractor_histogram(spec, full, full, full);
    const SpectrumResult s = exp_sums_all(hist, F);
    const double norm = s.maxNontrivialAbs / (double(p) * p * p);
    CHECK(norm <= std::pow(double(p), -0.5));
  }
}

TEST_CASE("c0 diagnostic and closed-form helpers") {
  const PrimeField F(11);
  ExtractorSpec spec;
  spec.a = IntPoly{0, 1};  // a(z) = z vanishes at 0
  CHECK(c0_size(spec, FpSet::of(F, {0, 1, 2})) == 1);

  CHECK(epsilon_formula(0.5, 0.0) == doctest::Approx(0.0));
  CHECK(epsilon_formula(0.5, 0.2) > epsilon_formula(0.5, 0.1));
  const double expected =
      std::pow(10000.0, ((22.0 - 0.05) * 0.5 + 1.0) / 8.0);
  CHECK(theorem_bound(0.5, 0.1, 10000.0) ==
        doctest::Approx(expected).epsilon(1e-9));
}
