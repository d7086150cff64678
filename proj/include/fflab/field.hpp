#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fflab {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CompositeModulus : Error { using Error::Error; };
struct ModulusTooSmall : Error { using Error::Error; };
struct SizeExceedsField : Error { using Error::Error; };
struct ArityMismatch : Error { using Error::Error; };
struct FieldMismatch : Error { using Error::Error; };
struct ZeroEnergy : Error { using Error::Error; };
struct BadPrime : Error { using Error::Error; };
struct DegenerateMap : Error { using Error::Error; };
struct DegenerateG : Error { using Error::Error; };
struct DegenerateF : Error { using Error::Error; };
struct IntervalTooLong : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct BetaViolated : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

// Quadratic-cost operations refuse fields above this size unless the caller
// passes an explicit override.
inline constexpr std::uint64_t kQuadraticFieldBudget = 1ull << 20;
// Triple-product budget for histogram-style kernels.
inline constexpr std::uint64_t kTripleBudget = 1'000'000'000ull;

// ---------------------------------------------------------------------------
// PrimeField
// ---------------------------------------------------------------------------

// Arithmetic context for F_p, p an odd prime >= 3. Immutable after
// construction; the primitive root is computed on first use under a lock.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p);

  std::uint64_t p() const { return p_; }

  std::uint64_t reduce(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += static_cast<long long>(p_);
    return static_cast<std::uint64_t>(r);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % p_);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t e) const;
  std::uint64_t inv(std::uint64_t a) const;

  // Smallest primitive root of F_p^x.
  std::uint64_t generator() const;

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

  PrimeField(const PrimeField& o) : p_(o.p_), gen_(o.gen_.load()) {}
  PrimeField& operator=(const PrimeField& o) {
    p_ = o.p_;
    gen_.store(o.gen_.load());
    return *this;
  }

 private:
  std::uint64_t p_;
  // 0 = not yet computed; recomputation races are idempotent.
  mutable std::atomic<std::uint64_t> gen_{0};
};

PrimeField make_field(std::uint64_t p);
bool is_prime(std::uint64_t n);
std::uint64_t find_generator(const PrimeField& F);

// ---------------------------------------------------------------------------
// FpSet
// ---------------------------------------------------------------------------

// Subset of F_p as a dense bit vector of length p.
class FpSet {
 public:
  explicit FpSet(const PrimeField& F)
      : field_(&F), bits_((F.p() + 63) / 64, 0) {}

  const PrimeField& field() const { return *field_; }
  std::uint64_t p() const { return field_->p(); }

  bool contains(std::uint64_t m) const {
    return (bits_[m >> 6] >> (m & 63)) & 1;
  }
  void insert(std::uint64_t m) {
    if (m >= p()) throw Error("FpSet: element out of range");
    bits_[m >> 6] |= 1ull << (m & 63);
  }
  void erase(std::uint64_t m) { bits_[m >> 6] &= ~(1ull << (m & 63)); }

  std::uint64_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<std::uint64_t> members() const;

  static FpSet full(const PrimeField& F);
  static FpSet of(const PrimeField& F,
                  std::initializer_list<std::uint64_t> ms);

  bool operator==(const FpSet& o) const {
    return p() == o.p() && bits_ == o.bits_;
  }

 private:
  const PrimeField* field_;
  std::vector<std::uint64_t> bits_;
};

inline void require_same_field(const FpSet& a, const FpSet& b) {
  if (a.p() != b.p()) throw FieldMismatch("sets live in different fields");
}

// Interval {start, start+1, ..., start+length-1} with wrap-around mod p.
struct FpInterval {
  std::uint64_t start = 0;
  std::uint64_t length = 0;

  FpSet materialize(const PrimeField& F) const;
  bool contains(const PrimeField& F, std::uint64_t x) const;
};

// ---------------------------------------------------------------------------
// IntPoly
// ---------------------------------------------------------------------------

// Univariate polynomial with integer coefficients, indexed by degree.
// degree() is -1 for the zero polynomial (the -infinity sentinel).
class IntPoly {
 public:
  IntPoly() = default;
  IntPoly(std::initializer_list<long long> coeffs) : c_(coeffs) { trim(); }
  explicit IntPoly(std::vector<long long> coeffs) : c_(std::move(coeffs)) {
    trim();
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  long long coeff(std::size_t i) const {
    return i < c_.size() ? c_[i] : 0;
  }
  const std::vector<long long>& coeffs() const { return c_; }

  IntPoly reduced(const PrimeField& F) const;
  int degree_mod(const PrimeField& F) const;
  bool constant_mod(const PrimeField& F) const { return degree_mod(F) <= 0; }
  std::uint64_t eval(const PrimeField& F, std::uint64_t x) const;

  bool operator==(const IntPoly& o) const { return c_ == o.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<long long> c_;
};

// f == u*x^k + v as formal polynomials mod p? Coefficient-wise test; returns
// (u, v) when the reduced coefficients vanish outside degrees {0, k}.
std::optional<std::pair<std::uint64_t, std::uint64_t>> is_affinely_dependent(
    const IntPoly& f, unsigned k, const PrimeField& F);

// ---------------------------------------------------------------------------
// MapSpec
// ---------------------------------------------------------------------------

// Integer linear form c0 + sum_i c_i * x_i over the map's variables, used as
// an exponent of the field generator.
struct LinearForm {
  long long constant = 0;
  std::array<long long, 3> coeff{0, 0, 0};

  bool operator==(const LinearForm&) const = default;
};

struct MapTerm {
  long long coeff = 1;
  std::array<unsigned, 3> powers{0, 0, 0};
  std::array<std::optional<IntPoly>, 3> polyFactors;
  std::optional<LinearForm> genExponent;

  bool operator==(const MapTerm&) const = default;
};

// Symbolic description of F in 1-3 variables: a sum of terms
//   coeff * prod x_i^powers[i] * prod polyFactors[i](x_i) * g^(genExponent).
struct MapSpec {
  int arity = 1;
  std::vector<MapTerm> terms;

  bool uses_generator() const {
    for (const auto& t : terms)
      if (t.genExponent) return true;
    return false;
  }
  bool operator==(const MapSpec&) const = default;
};

std::uint64_t eval_map(const MapSpec& spec, const PrimeField& F,
                       std::span<const std::uint64_t> point);
inline std::uint64_t eval_map(const MapSpec& spec, const PrimeField& F,
                              std::initializer_list<std::uint64_t> point) {
  return eval_map(spec, F,
                  std::span<const std::uint64_t>(point.begin(), point.size()));
}

// Convenience builder for purely monomial specs: {coeff, exponents...}.
MapSpec monomial_spec(int arity,
                      std::vector<std::pair<long long, std::array<unsigned, 3>>>
                          monomials);

// ---------------------------------------------------------------------------
// Misc field operations
// ---------------------------------------------------------------------------

// {x in F_p^x : x^k = 1}; cardinality gcd(k, p-1).
FpSet kth_roots_of_unity(const PrimeField& F, std::uint64_t k);

// k * d! reduced mod (p-1), reducing at every multiplication.
std::uint64_t factorial_exponent(std::uint64_t k, std::uint64_t d,
                                 const PrimeField& F);

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

// SplitMix64: the fixed, documented PRNG behind every seeded experiment.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  double uniform01() { return (next() >> 11) * 0x1.0p-53; }
};

// Uniform m-element subset via partial Fisher-Yates shuffle of 0..p-1.
// Bit-identical across platforms for identical (p, m, seed).
FpSet sample_subset(const PrimeField& F, std::uint64_t m, std::uint64_t seed);

}  // namespace fflab
