#pragma once

#include <complex>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

struct EquationCount {
  std::uint64_t n = 0;            // solution count
  std::uint64_t expectedNum = 0;  // |A||B||C||D| (expected = num / p)
  std::uint64_t p = 0;
  double expected() const { return double(expectedNum) / double(p); }
  double deviation() const { return std::abs(double(n) - expected()); }
};

// #{(a,b,c,d) in AxBxCxD : a + b = c d}, via the convolution path
// (sum histogram of A+B against the product histogram of C*D).
EquationCount sarkozy_count(const FpSet& A, const FpSet& B, const FpSet& C,
                            const FpSet& D);
// Four-nested-loop reference.
EquationCount sarkozy_count_brute(const FpSet& A, const FpSet& B,
                                  const FpSet& C, const FpSet& D);

// #{(a,b,c,d) : a + b = F(c,d)} for an arbitrary 2-variable spec.
EquationCount general_equation_count(const FpSet& A, const FpSet& B,
                                     const MapSpec& spec, const FpSet& C,
                                     const FpSet& D);

struct EssentialViolation {
  std::uint64_t trial = 0;
  std::uint64_t sizeA = 0, sizeB = 0, sizeC = 0, sizeD = 0;
};

struct EssentialReport {
  std::uint64_t trials = 0;
  std::uint64_t vacuous = 0;  // draws where C or D came out empty
  std::vector<EssentialViolation> violations;  // instances with N = 0
};

// Randomized search for unsolvable instances of a + b = F(c,d) with
// |C|,|D| < sqrt(p) and |A||B| > p^{2-deltaPrime}.
EssentialReport essential_check(const MapSpec& spec, const PrimeField& F,
                                std::uint64_t trials, std::uint64_t seed,
                                double deltaPrime = 0.0);

struct MultTable {
  std::uint64_t n = 0;
  std::uint64_t m = 0;  // distinct products ab, 1 <= a,b <= n
  double ratio = 0.0;   // m / n^2
  double tenenbaumDelta = 0.0;  // 1 - (1 + ln ln 2)/ln 2
};

MultTable mult_table(std::uint64_t n, bool overrideBudget = false);

// S_f(h, p) = sum_x e(h f(x)/p).
std::complex<double> weil_sum(const IntPoly& f, std::uint64_t h,
                              const PrimeField& F);

struct WeilCheck {
  double absSum = 0.0;
  double bound = 0.0;  // (k-1) sqrt(p), k = deg(f mod p)
  bool holds = false;  // vacuously true for h = 0 or k >= p
};

WeilCheck weil_bound_check(const IntPoly& f, std::uint64_t h,
                           const PrimeField& F);

struct IntervalPreimage {
  std::uint64_t count = 0;   // N(I), I = (u-L, u+L) open, wrap-around
  double statedBound = 0.0;  // L - (k-1) sqrt(p)
  double provedBound = 0.0;  // L - k sqrt(p), what the chain actually yields
};

IntervalPreimage interval_preimage_count(const IntPoly& f, std::uint64_t u,
                                         std::uint64_t L,
                                         const PrimeField& F);

struct WellSpacedResult {
  bool nonempty = false;  // F(A,B,C) meets [u+1, u+L], decided exactly
  double T = 0.0;         // correlation sum; T > 0 implies nonempty
};

WellSpacedResult well_spaced_check(const MapSpec& spec, const FpSet& A,
                                   const FpSet& B, const FpSet& C,
                                   std::uint64_t u, std::uint64_t L,
                                   bool overrideBudget = false);

}  // namespace fflab
