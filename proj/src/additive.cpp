#include "fflab/additive.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "fflab/extractor.hpp"

namespace fflab {

// ---------------------------------------------------------------------------
// Equation counting
// ---------------------------------------------------------------------------

namespace {

void check_quad(const FpSet& A, const FpSet& B, const FpSet& C,
                const FpSet& D) {
  require_same_field(A, B);
  require_same_field(A, C);
  require_same_field(A, D);
}

std::vector<std::uint64_t> sum_histogram(const FpSet& A, const FpSet& B) {
  const PrimeField& F = A.field();
  std::vector<std::uint64_t> s(F.p(), 0);
  for (std::uint64_t a : A.members())
    for (std::uint64_t b : B.members()) ++s[F.add(a, b)];
  return s;
}

EquationCount dot(const FpSet& A, const FpSet& B, const FpSet& C,
                  const FpSet& D, const std::vector<std::uint64_t>& rhsHist) {
  const auto s = sum_histogram(A, B);
  EquationCount e;
  e.p = A.p();
  e.expectedNum = A.size() * B.size() * C.size() * D.size();
  for (std::uint64_t w = 0; w < s.size(); ++w) e.n += s[w] * rhsHist[w];
  return e;
}

}  // namespace

EquationCount sarkozy_count(const FpSet& A, const FpSet& B, const FpSet& C,
                            const FpSet& D) {
  check_quad(A, B, C, D);
  const PrimeField& F = A.field();
  std::vector<std::uint64_t> prod(F.p(), 0);
  for (std::uint64_t c : C.members())
    for (std::uint64_t d : D.members()) ++prod[F.mul(c, d)];
  return dot(A, B, C, D, prod);
}

EquationCount sarkozy_count_brute(const FpSet& A, const FpSet& B,
                                  const FpSet& C, const FpSet& D) {
  check_quad(A, B, C, D);
  const PrimeField& F = A.field();
  EquationCount e;
  e.p = F.p();
  e.expectedNum = A.size() * B.size() * C.size() * D.size();
  const auto as = A.members(), bs = B.members(), cs = C.members(),
             ds = D.members();
  for (std::uint64_t a : as)
    for (std::uint64_t b : bs) {
      const std::uint64_t s = F.add(a, b);
      for (std::uint64_t c : cs)
        for (std::uint64_t d : ds)
          if (F.mul(c, d) == s) ++e.n;
    }
  return e;
}

EquationCount general_equation_count(const FpSet& A, const FpSet& B,
                                     const MapSpec& spec, const FpSet& C,
                                     const FpSet& D) {
  check_quad(A, B, C, D);
  const PrimeField& F = A.field();
  std::vector<std::uint64_t> rhs(F.p(), 0);
  for (std::uint64_t c : C.members())
    for (std::uint64_t d : D.members()) ++rhs[eval_map(spec, F, {c, d})];
  return dot(A, B, C, D, rhs);
}

EssentialReport essential_check(const MapSpec& spec, const PrimeField& F,
                                std::uint64_t trials, std::uint64_t seed,
                                double deltaPrime) {
  const std::uint64_t p = F.p();
  const double sp = std::sqrt(double(p));
  EssentialReport rep;
  rep.trials = trials;
  // |A| = |B| = the smallest size with |A||B| > p^{2-deltaPrime}.
  const std::uint64_t sAB = std::min<std::uint64_t>(
      p, static_cast<std::uint64_t>(
             std::floor(std::pow(double(p), (2.0 - deltaPrime) / 2.0))) +
             1);
  const std::uint64_t cdMax =
      static_cast<std::uint64_t>(std::ceil(sp)) - 1;  // |C|,|D| < sqrt(p)
  SplitMix64 rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t sC = cdMax == 0 ? 0 : 1 + rng.below(cdMax);
    const std::uint64_t sD = cdMax == 0 ? 0 : 1 + rng.below(cdMax);
    if (sC == 0 || sD == 0) {
      ++rep.vacuous;
      continue;
    }
    const FpSet A = sample_subset(F, sAB, rng.next());
    const FpSet B = sample_subset(F, sAB, rng.next());
    const FpSet C = sample_subset(F, sC, rng.next());
    const FpSet D = sample_subset(F, sD, rng.next());
    const EquationCount e = general_equation_count(A, B, spec, C, D);
    if (e.n == 0)
      rep.violations.push_back({t, A.size(), B.size(), C.size(), D.size()});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Multiplication table
// ---------------------------------------------------------------------------

MultTable mult_table(std::uint64_t n, bool overrideBudget) {
  if (n < 1) throw Error("mult_table: n must be >= 1");
  if (!overrideBudget && n > 100000)
    throw BudgetExceeded("mult_table budget is n <= 1e5");
  std::vector<std::uint64_t> bits(n * n / 64 + 1, 0);
  for (std::uint64_t a = 1; a <= n; ++a)
    for (std::uint64_t b = a; b <= n; ++b) {
      const std::uint64_t v = a * b;
      bits[v >> 6] |= 1ull << (v & 63);
    }
  MultTable t;
  t.n = n;
  for (std::uint64_t w : bits) t.m += std::popcount(w);
  t.ratio = double(t.m) / (double(n) * double(n));
  t.tenenbaumDelta =
      1.0 - (1.0 + std::log(std::log(2.0))) / std::log(2.0);
  return t;
}

// ---------------------------------------------------------------------------
// Weil sums and interval preimages
// ---------------------------------------------------------------------------

std::complex<double> weil_sum(const IntPoly& f, std::uint64_t h,
                              const PrimeField& F) {
  if (f.constant_mod(F)) throw DegenerateF("f is constant mod p");
  const std::uint64_t p = F.p();
  h %= p;
  std::complex<double> s = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t v = F.mul(h, f.eval(F, x));
    const double t = 2.0 * std::numbers::pi * double(v) / double(p);
    s += std::complex<double>{std::cos(t), std::sin(t)};
  }
  return s;
}

WeilCheck weil_bound_check(const IntPoly& f, std::uint64_t h,
                           const PrimeField& F) {
  const int k = f.degree_mod(F);
  WeilCheck c;
  c.absSum = std::abs(weil_sum(f, h, F));
  c.bound = double(k - 1) * std::sqrt(double(F.p()));
  h %= F.p();
  if (h == 0 || k < 1 || k >= static_cast<int>(F.p()))
    c.holds = true;  // bound only applies for h != 0, 1 <= k < p
  else
    c.holds = c.absSum <= c.bound + 1e-9 * (c.bound + 1.0);
  return c;
}

IntervalPreimage interval_preimage_count(const IntPoly& f, std::uint64_t u,
                                         std::uint64_t L,
                                         const PrimeField& F) {
  const std::uint64_t p = F.p();
  if (2 * L >= p)
    throw IntervalTooLong("interval_preimage_count requires L < p/2");
  if (L == 0) throw Error("L must be >= 1");
  const int k = f.degree_mod(F);
  if (k < 1) throw DegenerateF("f is constant mod p");
  // Open interval (u-L, u+L): the 2L-1 residues u-L+1, ..., u+L-1.
  const FpInterval I{F.sub(u % p, L - 1), 2 * L - 1};
  IntervalPreimage r;
  for (std::uint64_t x = 0; x < p; ++x)
    if (I.contains(F, f.eval(F, x))) ++r.count;
  const double sp = std::sqrt(double(p));
  r.statedBound = double(L) - double(k - 1) * sp;
  r.provedBound = double(L) - double(k) * sp;
  if (double(r.count) + 1e-9 < r.provedBound)
    throw Error("interval preimage count below the proved bound");
  return r;
}

// ---------------------------------------------------------------------------
// Well-spacedness
// ---------------------------------------------------------------------------

WellSpacedResult well_spaced_check(const MapSpec& spec, const FpSet& A,
                                   const FpSet& B, const FpSet& C,
                                   std::uint64_t u, std::uint64_t L,
                                   bool overrideBudget) {
  const PrimeField& F = A.field();
  const std::uint64_t p = F.p();
  if (L < 1 || L > p) throw Error("well_spaced_check requires 1 <= L <= p");
  const auto hist = value_histogram(spec, A, B, C, overrideBudget);
  u %= p;

  WellSpacedResult r;
  for (std::uint64_t j = 1; j <= L && !r.nonempty; ++j)
    if (hist[F.add(u, j % p)] > 0) r.nonempty = true;

  // Correlation of the solution-count function with the autoconvolution of
  // the indicator of [1, floor(L/2)] (a triangle supported on [2, 2M], which
  // sits inside [1, L]); positivity forces a hit in the interval.
  if (L == 1) {
    r.T = double(hist[F.add(u, 1)]);
    return r;
  }
  const std::uint64_t M = L / 2;  // 2M <= L keeps the support inside [1, L]
  double T = 0;
  for (std::uint64_t x = 2; x <= 2 * M; ++x) {
    const double tri =
        double(M) - std::abs(double(x) - double(M) - 1.0);
    T += tri * double(hist[F.add(u, x % p)]);
  }
  r.T = T;
  return r;
}

}  // namespace fflab
