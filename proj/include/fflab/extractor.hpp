#pragma once

#include <complex>
#include <unordered_map>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

// F(x,y,z) = a(z) x y + b(z) x^2 g(y) + h(y,z).
struct ExtractorSpec {
  IntPoly a{1};
  IntPoly b{1};
  IntPoly g{0, 0, 1};  // default y^2
  MapSpec h{2, {}};    // 2-variable spec in (y, z); empty means h = 0

  MapSpec to_map_spec() const;
  void validate() const;

  bool operator==(const ExtractorSpec&) const = default;
};

// c(w) = #{(x,y,z) in AxBxC : F(x,y,z) = w}.
std::vector<std::uint64_t> value_histogram(const MapSpec& spec, const FpSet& A,
                                           const FpSet& B, const FpSet& C,
                                           bool overrideBudget = false);
// Serial reference implementation.
std::vector<std::uint64_t> value_histogram_serial(const MapSpec& spec,
                                                  const FpSet& A,
                                                  const FpSet& B,
                                                  const FpSet& C,
                                                  bool overrideBudget = false);
// Specialized kernel for the extractor shape (coefficients precomputed per
// (y,z), Horner over x); agrees with the generic path.
std::vector<std::uint64_t> extractor_histogram(const ExtractorSpec& spec,
                                               const FpSet& A, const FpSet& B,
                                               const FpSet& C,
                                               bool overrideBudget = false);

struct SpectrumResult {
  std::vector<std::complex<double>> S;  // S_r for every r in F_p
  std::uint64_t maxNontrivialR = 0;
  double maxNontrivialAbs = 0.0;
};

// All exponential sums S_r = sum_w c(w) e(rw/p) at once.
SpectrumResult exp_sums_all(const std::vector<std::uint64_t>& histogram,
                            const PrimeField& F, bool overrideBudget = false);
// O(p^2) reference transform.
SpectrumResult exp_sums_naive(const std::vector<std::uint64_t>& histogram,
                              const PrimeField& F,
                              bool overrideBudget = false);
// Prime-length transform: re-index by a generator, cyclic convolution of
// length p-1.
SpectrumResult exp_sums_fast(const std::vector<std::uint64_t>& histogram,
                             const PrimeField& F);

// sum over AxBxC of sgn(sin(2 pi F / p)), exactly in integer arithmetic:
// +1 for residues in [1,(p-1)/2], -1 for [(p+1)/2, p-1], 0 for 0.
long long sgn_sin_sum(const MapSpec& spec, const FpSet& A, const FpSet& B,
                      const FpSet& C, bool overrideBudget = false);
// Independent path through a value histogram.
long long sgn_sin_from_histogram(const std::vector<std::uint64_t>& histogram,
                                 const PrimeField& F);

// Sparse census keyed by eta1 * p + eta2 (resp. xi1 * p + xi2).
using SparseCensus = std::unordered_map<std::uint64_t, std::uint64_t>;

struct NuCensus {
  SparseCensus nu;  // (y1-y2, g(y1)-g(y2)) over B^2
  std::uint64_t secondMoment = 0;
};

// Asserts the proof-derived bound secondMoment <= deg(g) |B|^2.
NuCensus nu_census(const IntPoly& g, const FpSet& B);

struct MuCensus {
  SparseCensus mu;   // alternating (sum, sum of squares) over A^4
  SparseCensus mu1;  // restricted to x1 = x2
  SparseCensus mu2;  // restricted to x1 != x2
  std::uint64_t total = 0;  // |A|^4
  std::uint64_t sumMuSq = 0;
  std::uint64_t sumMu1Sq = 0;
  std::uint64_t sumMu2Sq = 0;
  std::uint64_t pairCollisions = 0;  // N with sumMu1Sq = |A|^2 N, N <= 2|A|^2
};

MuCensus mu_census(const FpSet& A, bool overrideBudget = false);

struct MuTSecondMoment {
  std::uint64_t value = 0;  // sum_xi mu(xi, t)^2, brute force
  std::uint64_t viaLines = 0;  // recount through the line family of eq (5.8)
  std::uint64_t maxMu = 0;  // max_xi mu(xi, t); C_k empty for k > maxMu
};

MuTSecondMoment mu_t_second_moment(const FpSet& A, std::uint64_t t);

struct EntropyRow {
  double alpha = 0.0;
  std::uint64_t p = 0;
  std::uint64_t trial = 0;
  std::uint64_t setSize = 0;
  double maxNontrivialNorm = 0.0;  // max_{r!=0} |S_r| / |A||B||C|
  double sgnSinNorm = 0.0;         // |sgn-sin sum| / |A||B||C|
};

struct EntropyScan {
  std::vector<EntropyRow> rows;
  // Per alpha: fitted epsilon-hat = -slope of ln(median spectral norm)
  // against ln p. NaN when undefined.
  std::vector<std::pair<double, double>> epsilonHat;
};

EntropyScan entropy_scan(const ExtractorSpec& spec,
                         const std::vector<double>& alphas,
                         const std::vector<std::uint64_t>& primes,
                         std::uint64_t trials, std::uint64_t seed,
                         bool overrideBudget = false);

// |{z in C : a(z) b(z) = 0}| — the C_0 diagnostic.
std::uint64_t c0_size(const ExtractorSpec& spec, const FpSet& C);

// epsilon(alpha) = alpha/8 (2 + gamma/2 - 1/alpha).
double epsilon_formula(double alpha, double gamma);
// p^{((22 - gamma/2) alpha + 1)/8}.
double theorem_bound(double alpha, double gamma, double p);

}  // namespace fflab
