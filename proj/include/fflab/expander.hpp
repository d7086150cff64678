#pragma once

#include <optional>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

// F(x,y) = f(x) + x^k g(y).
struct ExpanderSpec {
  IntPoly f;
  unsigned k = 1;
  IntPoly g{1};  // default g = 1, i.e. F = f(x) + x^k

  MapSpec to_map_spec() const;
  // A prime is "bad" when f collapses to u*x^k + v mod p; those primes are
  // reported and skipped by experiments.
  bool bad_prime(const PrimeField& F) const {
    return is_affinely_dependent(f, k, F).has_value();
  }
};

// {F(a,b) : a in A, b in B}.
FpSet image_set(const MapSpec& spec, const FpSet& A, const FpSet& B);

// r(z) = #{(x,y) in AxB : F(x,y) = z}, indexed by F_p.
std::vector<std::uint64_t> representation_counts(const MapSpec& spec,
                                                 const FpSet& A,
                                                 const FpSet& B);

// Number of quadruples (x1,x2,y1,y2) in A^2 x B^2 with
// F(x1,y1) = F(x2,y2); equals sum_z r(z)^2.
std::uint64_t collision_energy(const MapSpec& spec, const FpSet& A,
                               const FpSet& B);

// ceil(|A|^2 |B|^2 / E); Cauchy-Schwarz lower bound for |image_set|.
std::uint64_t cs_lower_bound(std::uint64_t sizeA, std::uint64_t sizeB,
                             std::uint64_t energy);

struct LineCensus {
  std::uint64_t xSetSize = 0;         // |{(a,b) in A^2 : b^{kd!} != a^{kd!}}|
  std::uint64_t distinctLineCount = 0;  // distinct lines l_{x1,x2}
};

LineCensus x_set_and_line_census(const ExpanderSpec& spec, const FpSet& A);

struct ExpansionSample {
  std::uint64_t p = 0;
  double alpha = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t sizeA = 0, sizeB = 0;
  std::uint64_t imageSize = 0;
  std::uint64_t energy = 0;
  std::uint64_t csLowerBound = 0;
  double ratio = 0.0;  // imageSize / sizeA
};

struct ExpansionReport {
  std::vector<ExpansionSample> samples;
  std::vector<std::uint64_t> skippedBadPrimes;
  // Least-squares slope of ln(median image size) against ln|A| across primes;
  // absent when fewer than two distinct abscissae exist.
  std::optional<double> kappaHat;
};

ExpansionReport expansion_report(const MapSpec& spec, double alpha,
                                 const std::vector<std::uint64_t>& primes,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const ExpanderSpec* badPrimeFilter = nullptr);

struct WitnessSets {
  FpSet A;
  FpSet B;
  std::uint64_t shiftA = 0;
  std::uint64_t shiftB = 0;
  std::uint64_t intervalLen = 0;  // |I| = ceil(p^alpha)
};

// Interval-averaging witness against expansion of f(x) + g(y):
// f(A) lands in shiftA + [0, |I|), g(B) in shiftB + [0, |I|), so the image
// of F on A x B fits inside an interval of length 2|I| - 1.
WitnessSets non_expander_witness(const IntPoly& f, const IntPoly& g,
                                 const PrimeField& F, double alpha);

struct BourgainWitness {
  FpSet A;
  FpSet B;
  std::uint64_t shift = 0;  // the coset shift a
  std::uint64_t L = 0;
};

// Witness sets for F(x,y) = x^{2k} + u x^k + x^k y = x^k (x^k + y + u):
// A = {x : a x^k in [1,L]} for the densest coset shift a, B = {y : a(y+u) in
// [1,L]}. Every value F(a,b) is a'^2 x'y' with x',y' in [1,2L].
BourgainWitness bourgain_counterexample(unsigned k, long long u,
                                        const PrimeField& F, std::uint64_t L);

struct ProductFormWitness {
  FpSet A;
  FpSet B;
  std::uint64_t L = 0;
  bool sizeAssertedA = false;  // the interval-preimage bound was effective
  bool sizeAssertedB = false;
};

// Witness sets for F(x,y) = f(x)(f(x) + g(y)): preimages of the interval
// (0, 2L) with L = ceil(deg(f) * sqrt(p)).
ProductFormWitness product_form_counterexample(const IntPoly& f,
                                               const IntPoly& g,
                                               const PrimeField& F);

}  // namespace fflab
