#include "fflab/field.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace fflab {

// ---------------------------------------------------------------------------
// Primality (deterministic Miller-Rabin for 64-bit inputs)
// ---------------------------------------------------------------------------

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                          19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Sufficient witness set for all 64-bit integers.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                          19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// PrimeField
// ---------------------------------------------------------------------------

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 3) throw ModulusTooSmall("modulus must be an odd prime >= 3");
  if (!is_prime(p)) throw CompositeModulus("modulus is not prime");
}

PrimeField make_field(std::uint64_t p) { return PrimeField(p); }

std::uint64_t PrimeField::pow(std::uint64_t base, std::uint64_t e) const {
  return powmod(base, e, p_);
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  if (a == 0) throw Error("inverse of zero");
  return powmod(a, p_ - 2, p_);
}

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> fs;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      fs.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) fs.push_back(n);
  return fs;
}

}  // namespace

std::uint64_t PrimeField::generator() const {
  std::uint64_t cached = gen_.load(std::memory_order_relaxed);
  if (cached != 0) return cached;
  const std::uint64_t m = p_ - 1;
  const auto fs = prime_factors(m);
  for (std::uint64_t g = 2; g < p_; ++g) {
    bool primitive = true;
    for (std::uint64_t q : fs) {
      if (powmod(g, m / q, p_) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      gen_.store(g, std::memory_order_relaxed);
      return g;
    }
  }
  throw Error("no generator found");  // unreachable for prime p
}

std::uint64_t find_generator(const PrimeField& F) { return F.generator(); }

// ---------------------------------------------------------------------------
// FpSet
// ---------------------------------------------------------------------------

std::uint64_t FpSet::size() const {
  std::uint64_t n = 0;
  for (std::uint64_t w : bits_) n += std::popcount(w);
  return n;
}

std::vector<std::uint64_t> FpSet::members() const {
  std::vector<std::uint64_t> ms;
  ms.reserve(size());
  for (std::uint64_t i = 0; i < bits_.size(); ++i) {
    std::uint64_t w = bits_[i];
    while (w) {
      ms.push_back(i * 64 + std::countr_zero(w));
      w &= w - 1;
    }
  }
  return ms;
}

FpSet FpSet::full(const PrimeField& F) {
  FpSet s(F);
  for (std::uint64_t m = 0; m < F.p(); ++m) s.insert(m);
  return s;
}

FpSet FpSet::of(const PrimeField& F,
                std::initializer_list<std::uint64_t> ms) {
  FpSet s(F);
  for (std::uint64_t m : ms) s.insert(m);
  return s;
}

FpSet FpInterval::materialize(const PrimeField& F) const {
  if (length > F.p()) throw Error("interval longer than the field");
  FpSet s(F);
  std::uint64_t x = start % F.p();
  for (std::uint64_t i = 0; i < length; ++i) {
    s.insert(x);
    x = F.add(x, 1);
  }
  return s;
}

bool FpInterval::contains(const PrimeField& F, std::uint64_t x) const {
  std::uint64_t off = F.sub(x, start % F.p());
  return off < length;
}

// ---------------------------------------------------------------------------
// IntPoly
// ---------------------------------------------------------------------------

IntPoly IntPoly::reduced(const PrimeField& F) const {
  std::vector<long long> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i)
    r[i] = static_cast<long long>(F.reduce(c_[i]));
  return IntPoly(std::move(r));
}

int IntPoly::degree_mod(const PrimeField& F) const {
  for (int i = degree(); i >= 0; --i)
    if (F.reduce(c_[i]) != 0) return i;
  return -1;
}

std::uint64_t IntPoly::eval(const PrimeField& F, std::uint64_t x) const {
  std::uint64_t acc = 0;
  for (int i = degree(); i >= 0; --i)
    acc = F.add(F.mul(acc, x), F.reduce(c_[i]));
  return acc;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> is_affinely_dependent(
    const IntPoly& f, unsigned k, const PrimeField& F) {
  const IntPoly r = f.reduced(F);
  for (int i = 0; i <= r.degree(); ++i) {
    if (i != 0 && i != static_cast<int>(k) && r.coeff(i) != 0)
      return std::nullopt;
  }
  return std::make_pair(static_cast<std::uint64_t>(r.coeff(k)),
                        static_cast<std::uint64_t>(r.coeff(0)));
}

// ---------------------------------------------------------------------------
// MapSpec
// ---------------------------------------------------------------------------

std::uint64_t eval_map(const MapSpec& spec, const PrimeField& F,
                       std::span<const std::uint64_t> point) {
  if (static_cast<int>(point.size()) != spec.arity)
    throw ArityMismatch("point arity does not match spec arity");
  std::uint64_t total = 0;
  for (const auto& t : spec.terms) {
    std::uint64_t acc = F.reduce(t.coeff);
    for (int i = 0; i < spec.arity && acc != 0; ++i) {
      if (t.powers[i] != 0) acc = F.mul(acc, F.pow(point[i], t.powers[i]));
      if (t.polyFactors[i])
        acc = F.mul(acc, t.polyFactors[i]->eval(F, point[i]));
    }
    if (t.genExponent && acc != 0) {
      // Exponent of the generator lives mod p-1.
      const std::uint64_t m = F.p() - 1;
      auto modm = [m](long long v) {
        long long r = v % static_cast<long long>(m);
        if (r < 0) r += static_cast<long long>(m);
        return static_cast<std::uint64_t>(r);
      };
      unsigned __int128 e = modm(t.genExponent->constant);
      for (int i = 0; i < spec.arity; ++i)
        e += static_cast<unsigned __int128>(modm(t.genExponent->coeff[i])) *
             (point[i] % m) % m;
      acc = F.mul(acc, F.pow(F.generator(), static_cast<std::uint64_t>(e % m)));
    }
    total = F.add(total, acc);
  }
  return total;
}

MapSpec monomial_spec(
    int arity,
    std::vector<std::pair<long long, std::array<unsigned, 3>>> monomials) {
  MapSpec s;
  s.arity = arity;
  for (auto& [c, e] : monomials) {
    MapTerm t;
    t.coeff = c;
    t.powers = e;
    s.terms.push_back(std::move(t));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Roots of unity, factorial exponents
// ---------------------------------------------------------------------------

FpSet kth_roots_of_unity(const PrimeField& F, std::uint64_t k) {
  if (k == 0) throw Error("k must be positive");
  FpSet s(F);
  const std::uint64_t g = F.generator();
  const std::uint64_t m = F.p() - 1;
  const std::uint64_t d = std::gcd(k, m);
  // Roots form the cyclic subgroup of order d generated by g^(m/d).
  const std::uint64_t h = F.pow(g, m / d);
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i < d; ++i) {
    s.insert(x);
    x = F.mul(x, h);
  }
  return s;
}

std::uint64_t factorial_exponent(std::uint64_t k, std::uint64_t d,
                                 const PrimeField& F) {
  if (k == 0 || d == 0) throw Error("factorial_exponent: k, d must be >= 1");
  const std::uint64_t m = F.p() - 1;
  std::uint64_t e = k % m;
  for (std::uint64_t i = 2; i <= d; ++i) e = mulmod(e, i % m, m);
  return e;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

FpSet sample_subset(const PrimeField& F, std::uint64_t m, std::uint64_t seed) {
  const std::uint64_t p = F.p();
  if (m > p) throw SizeExceedsField("subset size exceeds field size");
  FpSet s(F);
  if (m == 0) return s;
  if (m == p) return FpSet::full(F);
  std::vector<std::uint32_t> v(p);
  std::iota(v.begin(), v.end(), 0u);
  SplitMix64 rng(seed);
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uint64_t j = i + rng.below(p - i);
    std::swap(v[i], v[j]);
    s.insert(v[i]);
  }
  return s;
}

}  // namespace fflab
