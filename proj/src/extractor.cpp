#include "fflab/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#ifdef FFLAB_HAVE_FFTW3
#include <fftw3.h>
#endif

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fflab {

// ---------------------------------------------------------------------------
// ExtractorSpec
// ---------------------------------------------------------------------------

void ExtractorSpec::validate() const {
  if (a.degree() < 0 || b.degree() < 0)
    throw Error("a(z), b(z) must be nonzero polynomials");
  if (g.degree() < 2) throw DegenerateG("g must have degree >= 2");
  if (h.arity != 2) throw ArityMismatch("h must be a 2-variable spec");
}

MapSpec ExtractorSpec::to_map_spec() const {
  validate();
  MapSpec s;
  s.arity = 3;
  {
    MapTerm t;  // a(z) x y
    t.powers = {1, 1, 0};
    t.polyFactors[2] = a;
    s.terms.push_back(std::move(t));
  }
  {
    MapTerm t;  // b(z) x^2 g(y)
    t.powers = {2, 0, 0};
    t.polyFactors[1] = g;
    t.polyFactors[2] = b;
    s.terms.push_back(std::move(t));
  }
  for (const auto& ht : h.terms) {
    // h lives in (y, z): shift its variables up by one slot.
    MapTerm t;
    t.coeff = ht.coeff;
    t.powers = {0, ht.powers[0], ht.powers[1]};
    t.polyFactors[1] = ht.polyFactors[0];
    t.polyFactors[2] = ht.polyFactors[1];
    if (ht.genExponent) {
      LinearForm lf;
      lf.constant = ht.genExponent->constant;
      lf.coeff = {0, ht.genExponent->coeff[0], ht.genExponent->coeff[1]};
      t.genExponent = lf;
    }
    s.terms.push_back(std::move(t));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Histograms
// ---------------------------------------------------------------------------

namespace {

void check_triple(const FpSet& A, const FpSet& B, const FpSet& C,
                  bool overrideBudget) {
  require_same_field(A, B);
  require_same_field(A, C);
  if (A.empty() || B.empty() || C.empty())
    throw Error("histogram: empty input set");
  const unsigned __int128 work = static_cast<unsigned __int128>(A.size()) *
                                 B.size() * C.size();
  if (!overrideBudget && work > kTripleBudget)
    throw BudgetExceeded("|A||B||C| exceeds the histogram budget");
}

}  // namespace

std::vector<std::uint64_t> value_histogram_serial(const MapSpec& spec,
                                                  const FpSet& A,
                                                  const FpSet& B,
                                                  const FpSet& C,
                                                  bool overrideBudget) {
  check_triple(A, B, C, overrideBudget);
  const PrimeField& F = A.field();
  std::vector<std::uint64_t> hist(F.p(), 0);
  const auto as = A.members(), bs = B.members(), cs = C.members();
  for (std::uint64_t z : cs)
    for (std::uint64_t y : bs)
      for (std::uint64_t x : as) ++hist[eval_map(spec, F, {x, y, z})];
  return hist;
}

std::vector<std::uint64_t> value_histogram(const MapSpec& spec, const FpSet& A,
                                           const FpSet& B, const FpSet& C,
                                           bool overrideBudget) {
  check_triple(A, B, C, overrideBudget);
  const PrimeField& F = A.field();
  const auto as = A.members(), bs = B.members(), cs = C.members();
  std::vector<std::uint64_t> hist(F.p(), 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(F.p(), 0);
#pragma omp for schedule(dynamic) nowait
    for (long long zi = 0; zi < static_cast<long long>(cs.size()); ++zi) {
      const std::uint64_t z = cs[zi];
      for (std::uint64_t y : bs)
        for (std::uint64_t x : as) ++local[eval_map(spec, F, {x, y, z})];
    }
#pragma omp critical
    for (std::uint64_t w = 0; w < F.p(); ++w) hist[w] += local[w];
  }
  return hist;
}

std::vector<std::uint64_t> extractor_histogram(const ExtractorSpec& spec,
                                               const FpSet& A, const FpSet& B,
                                               const FpSet& C,
                                               bool overrideBudget) {
  spec.validate();
  check_triple(A, B, C, overrideBudget);
  const PrimeField& F = A.field();
  const auto as = A.members(), bs = B.members(), cs = C.members();

  std::vector<std::uint64_t> gy(bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) gy[i] = spec.g.eval(F, bs[i]);

  std::vector<std::uint64_t> hist(F.p(), 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(F.p(), 0);
#pragma omp for schedule(dynamic) nowait
    for (long long zi = 0; zi < static_cast<long long>(cs.size()); ++zi) {
      const std::uint64_t z = cs[zi];
      const std::uint64_t az = spec.a.eval(F, z);
      const std::uint64_t bz = spec.b.eval(F, z);
      for (std::size_t yi = 0; yi < bs.size(); ++yi) {
        const std::uint64_t y = bs[yi];
        // F = c2 x^2 + c1 x + c0 for fixed (y, z)
        const std::uint64_t c1 = F.mul(az, y);
        const std::uint64_t c2 = F.mul(bz, gy[yi]);
        const std::uint64_t c0 =
            spec.h.terms.empty() ? 0 : eval_map(spec.h, F, {y, z});
        for (std::uint64_t x : as)
          ++local[F.add(F.mul(F.add(F.mul(c2, x), c1), x), c0)];
      }
    }
#pragma omp critical
    for (std::uint64_t w = 0; w < F.p(); ++w) hist[w] += local[w];
  }
  return hist;
}

// ---------------------------------------------------------------------------
// Exponential sums
// ---------------------------------------------------------------------------

namespace {

SpectrumResult finish_spectrum(std::vector<std::complex<double>> S) {
  SpectrumResult r;
  r.S = std::move(S);
  for (std::uint64_t i = 1; i < r.S.size(); ++i) {
    const double m = std::abs(r.S[i]);
    if (m > r.maxNontrivialAbs) {
      r.maxNontrivialAbs = m;
      r.maxNontrivialR = i;
    }
  }
  return r;
}

}  // namespace

SpectrumResult exp_sums_naive(const std::vector<std::uint64_t>& histogram,
                              const PrimeField& F, bool overrideBudget) {
  const std::uint64_t p = F.p();
  if (histogram.size() != p) throw Error("histogram size must equal p");
  if (!overrideBudget && p > kQuadraticFieldBudget)
    throw BudgetExceeded("naive transform is quadratic in p");
  std::vector<std::complex<double>> roots(p);
  for (std::uint64_t j = 0; j < p; ++j) {
    const double t = 2.0 * std::numbers::pi * double(j) / double(p);
    roots[j] = {std::cos(t), std::sin(t)};
  }
  std::vector<std::complex<double>> S(p);
#pragma omp parallel for schedule(static)
  for (long long r = 0; r < static_cast<long long>(p); ++r) {
    std::complex<double> acc = 0;
    std::uint64_t idx = 0;
    for (std::uint64_t w = 0; w < p; ++w) {
      if (histogram[w]) acc += double(histogram[w]) * roots[idx];
      idx += r;
      if (idx >= p) idx -= p;
    }
    S[r] = acc;
  }
  return finish_spectrum(std::move(S));
}

namespace {

// Cyclic convolution of two complex sequences of equal length.
std::vector<std::complex<double>> cyclic_convolution(
    const std::vector<std::complex<double>>& u,
    const std::vector<std::complex<double>>& v) {
  const std::size_t n = u.size();
#ifdef FFLAB_HAVE_FFTW3
  std::vector<std::complex<double>> U(n), V(n), out(n);
  fftw_plan pu = fftw_plan_dft_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(u.data())),
      reinterpret_cast<fftw_complex*>(U.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(pu);
  fftw_destroy_plan(pu);
  fftw_plan pv = fftw_plan_dft_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(v.data())),
      reinterpret_cast<fftw_complex*>(V.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(pv);
  fftw_destroy_plan(pv);
  for (std::size_t i = 0; i < n; ++i) U[i] *= V[i];
  fftw_plan pb = fftw_plan_dft_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(U.data()),
      reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
      FFTW_ESTIMATE);
  fftw_execute(pb);
  fftw_destroy_plan(pb);
  for (auto& x : out) x /= double(n);
  return out;
#else
  std::vector<std::complex<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += u[j] * v[(i + n - j) % n];
    out[i] = acc;
  }
  return out;
#endif
}

}  // namespace

SpectrumResult exp_sums_fast(const std::vector<std::uint64_t>& histogram,
                             const PrimeField& F) {
  const std::uint64_t p = F.p();
  if (histogram.size() != p) throw Error("histogram size must equal p");
  const std::uint64_t n = p - 1;
  const std::uint64_t g = F.generator();
  const std::uint64_t ginv = F.inv(g);

  // Rader re-indexing: S_{g^a} - c_0 = sum_b c_{g^{-b}} e(g^{a-b}/p),
  // a cyclic convolution of length p-1.
  std::vector<std::complex<double>> u(n), v(n);
  std::uint64_t w = 1;   // g^{-b}
  std::uint64_t gm = 1;  // g^m
  for (std::uint64_t i = 0; i < n; ++i) {
    u[i] = double(histogram[w]);
    const double t = 2.0 * std::numbers::pi * double(gm) / double(p);
    v[i] = {std::cos(t), std::sin(t)};
    w = F.mul(w, ginv);
    gm = F.mul(gm, g);
  }
  const auto conv = cyclic_convolution(u, v);

  std::vector<std::complex<double>> S(p);
  double total = 0;
  for (std::uint64_t i = 0; i < p; ++i) total += double(histogram[i]);
  S[0] = total;
  const double c0 = double(histogram[0]);
  std::uint64_t r = 1;  // g^a
  for (std::uint64_t a = 0; a < n; ++a) {
    S[r] = conv[a] + c0;
    r = F.mul(r, g);
  }
  return finish_spectrum(std::move(S));
}

SpectrumResult exp_sums_all(const std::vector<std::uint64_t>& histogram,
                            const PrimeField& F, bool overrideBudget) {
  if (F.p() > 512) return exp_sums_fast(histogram, F);
  return exp_sums_naive(histogram, F, overrideBudget);
}

// ---------------------------------------------------------------------------
// sgn-sin sums
// ---------------------------------------------------------------------------

namespace {

inline int sgn_sin(std::uint64_t v, std::uint64_t p) {
  if (v == 0) return 0;
  return v <= (p - 1) / 2 ? 1 : -1;
}

}  // namespace

long long sgn_sin_sum(const MapSpec& spec, const FpSet& A, const FpSet& B,
                      const FpSet& C, bool overrideBudget) {
  check_triple(A, B, C, overrideBudget);
  const PrimeField& F = A.field();
  const std::uint64_t p = F.p();
  const auto as = A.members(), bs = B.members(), cs = C.members();
  long long total = 0;
#pragma omp parallel for reduction(+ : total) schedule(dynamic)
  for (long long zi = 0; zi < static_cast<long long>(cs.size()); ++zi) {
    long long local = 0;
    for (std::uint64_t y : bs)
      for (std::uint64_t x : as)
        local += sgn_sin(eval_map(spec, F, {x, y, cs[zi]}), p);
    total += local;
  }
  return total;
}

long long sgn_sin_from_histogram(const std::vector<std::uint64_t>& histogram,
                                 const PrimeField& F) {
  const std::uint64_t p = F.p();
  if (histogram.size() != p) throw Error("histogram size must equal p");
  long long total = 0;
  for (std::uint64_t w = 0; w < p; ++w)
    total += sgn_sin(w, p) * static_cast<long long>(histogram[w]);
  return total;
}

// ---------------------------------------------------------------------------
// Moment systems
// ---------------------------------------------------------------------------

NuCensus nu_census(const IntPoly& g, const FpSet& B) {
  const PrimeField& F = B.field();
  const int dg = g.degree_mod(F);
  if (dg <= 1) throw DegenerateG("nu_census requires deg(g) >= 2 mod p");
  const std::uint64_t p = F.p();
  const auto bs = B.members();
  NuCensus out;
  for (std::uint64_t y1 : bs) {
    const std::uint64_t g1 = g.eval(F, y1);
    for (std::uint64_t y2 : bs) {
      const std::uint64_t e1 = F.sub(y1, y2);
      const std::uint64_t e2 = F.sub(g1, g.eval(F, y2));
      ++out.nu[e1 * p + e2];
    }
  }
  for (const auto& [k, v] : out.nu) out.secondMoment += v * v;
  const std::uint64_t sz = B.size();
  if (out.secondMoment > static_cast<std::uint64_t>(dg) * sz * sz)
    throw Error("nu second moment exceeds the proof-derived bound");
  return out;
}

MuCensus mu_census(const FpSet& A, bool overrideBudget) {
  const PrimeField& F = A.field();
  const std::uint64_t p = F.p();
  const auto as = A.members();
  const std::uint64_t sz = as.size();
  if (sz == 0) throw Error("mu_census: empty set");
  const unsigned __int128 work =
      static_cast<unsigned __int128>(sz) * sz * sz * sz;
  if (!overrideBudget && work > kTripleBudget)
    throw BudgetExceeded("|A|^4 exceeds the census budget");

  // Pair signatures (x1 - x2, x1^2 - x2^2); mu is their self-convolution.
  SparseCensus pairSig;
  for (std::uint64_t x1 : as)
    for (std::uint64_t x2 : as) {
      const std::uint64_t s1 = F.sub(x1, x2);
      const std::uint64_t s2 = F.sub(F.mul(x1, x1), F.mul(x2, x2));
      ++pairSig[s1 * p + s2];
    }

  MuCensus out;
  out.total = sz * sz * sz * sz;
  for (const auto& [ka, va] : pairSig) {
    const std::uint64_t a1 = ka / p, a2 = ka % p;
    for (const auto& [kb, vb] : pairSig) {
      const std::uint64_t b1 = kb / p, b2 = kb % p;
      out.mu[F.add(a1, b1) * p + F.add(a2, b2)] += va * vb;
    }
  }
  // x1 = x2 contributes signature (0,0) exactly |A| times.
  for (const auto& [k, v] : pairSig) out.mu1[k] += sz * v;
  for (const auto& [k, v] : out.mu) {
    const auto it = out.mu1.find(k);
    const std::uint64_t m1 = it == out.mu1.end() ? 0 : it->second;
    if (v > m1) out.mu2[k] = v - m1;
    out.sumMuSq += v * v;
  }
  for (const auto& [k, v] : out.mu1) out.sumMu1Sq += v * v;
  for (const auto& [k, v] : out.mu2) out.sumMu2Sq += v * v;
  for (const auto& [k, v] : pairSig) out.pairCollisions += v * v;

  if (out.pairCollisions > 2 * sz * sz)
    throw Error("mu1 pair-collision count exceeds 2|A|^2");
  if (out.sumMu1Sq != sz * sz * out.pairCollisions)
    throw Error("mu1 second-moment identity violated");
  return out;
}

MuTSecondMoment mu_t_second_moment(const FpSet& A, std::uint64_t t) {
  const PrimeField& F = A.field();
  const std::uint64_t p = F.p();
  const auto as = A.members();
  MuTSecondMoment out;

  // Brute path: quadruples (x1, x2, t, x4) keyed by (xi1, xi2) straight
  // from the defining system.
  SparseCensus brute;
  for (std::uint64_t x1 : as)
    for (std::uint64_t x2 : as) {
      for (std::uint64_t x4 : as) {
        const std::uint64_t xi1 = F.sub(F.add(F.sub(x1, x2), t), x4);
        std::uint64_t xi2 = F.sub(F.mul(x1, x1), F.mul(x2, x2));
        xi2 = F.add(xi2, F.mul(t, t));
        xi2 = F.sub(xi2, F.mul(x4, x4));
        ++brute[xi1 * p + xi2];
      }
    }
  for (const auto& [k, v] : brute) {
    out.value += v * v;
    out.maxMu = std::max(out.maxMu, v);
  }

  // Line path: same count through the (xi1, xi'2) change of variable of the
  // incidence argument, evaluating each line equation at xi1.
  SparseCensus lines;
  for (std::uint64_t x1 : as)
    for (std::uint64_t x2 : as) {
      const std::uint64_t s = F.add(F.sub(x1, x2), t);
      std::uint64_t c = F.sub(F.mul(x1, x1), F.mul(x2, x2));
      c = F.add(c, F.mul(t, t));
      c = F.sub(c, F.mul(s, s));
      for (std::uint64_t x4 : as) {
        const std::uint64_t xi1 = F.sub(s, x4);
        const std::uint64_t xi2p = F.add(F.mul(F.mul(2 % p, s), xi1), c);
        ++lines[xi1 * p + xi2p];
      }
    }
  for (const auto& [k, v] : lines) out.viaLines += v * v;

  if (out.value != out.viaLines)
    throw Error("mu(.,t) second-moment cross-check failed");
  return out;
}

// ---------------------------------------------------------------------------
// Entropy scan
// ---------------------------------------------------------------------------

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

EntropyScan entropy_scan(const ExtractorSpec& spec,
                         const std::vector<double>& alphas,
                         const std::vector<std::uint64_t>& primes,
                         std::uint64_t trials, std::uint64_t seed,
                         bool overrideBudget) {
  spec.validate();
  for (double a : alphas)
    if (a <= 0.0 || a >= 1.0) throw Error("alpha grid must lie in (0,1)");
  EntropyScan scan;
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    const double alpha = alphas[ai];
    std::vector<double> lnP, lnBias;
    for (std::size_t pi = 0; pi < primes.size(); ++pi) {
      const PrimeField F(primes[pi]);
      const std::uint64_t m = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(std::pow(double(F.p()), alpha)));
      const std::uint64_t base =
          seed + 1000003ull * pi + 7919ull * (ai + 1);
      std::vector<double> biases;
      for (std::uint64_t t = 0; t < trials; ++t) {
        const FpSet A = sample_subset(F, m, base + 3 * t);
        const FpSet B = sample_subset(F, m, base + 3 * t + 1);
        const FpSet C = sample_subset(F, m, base + 3 * t + 2);
        const auto hist = extractor_histogram(spec, A, B, C, overrideBudget);
        const auto spec_res = exp_sums_all(hist, F, overrideBudget);
        const double nTerms = double(m) * double(m) * double(m);
        EntropyRow row;
        row.alpha = alpha;
        row.p = F.p();
        row.trial = t;
        row.setSize = m;
        row.maxNontrivialNorm = spec_res.maxNontrivialAbs / nTerms;
        row.sgnSinNorm =
            std::abs(double(sgn_sin_from_histogram(hist, F))) / nTerms;
        biases.push_back(row.maxNontrivialNorm);
        scan.rows.push_back(row);
      }
      lnP.push_back(std::log(double(F.p())));
      lnBias.push_back(std::log(std::max(median_of(biases), 1e-300)));
    }
    // epsilon-hat = -slope of ln(bias) against ln(p)
    double eps = std::numeric_limits<double>::quiet_NaN();
    if (lnP.size() >= 2) {
      const double n = double(lnP.size());
      const double mx = std::accumulate(lnP.begin(), lnP.end(), 0.0) / n;
      const double my = std::accumulate(lnBias.begin(), lnBias.end(), 0.0) / n;
      double sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < lnP.size(); ++i) {
        sxx += (lnP[i] - mx) * (lnP[i] - mx);
        sxy += (lnP[i] - mx) * (lnBias[i] - my);
      }
      if (sxx > 0) eps = -sxy / sxx;
    }
    scan.epsilonHat.emplace_back(alpha, eps);
  }
  return scan;
}

std::uint64_t c0_size(const ExtractorSpec& spec, const FpSet& C) {
  const PrimeField& F = C.field();
  std::uint64_t n = 0;
  for (std::uint64_t z : C.members())
    if (F.mul(spec.a.eval(F, z), spec.b.eval(F, z)) == 0) ++n;
  return n;
}

double epsilon_formula(double alpha, double gamma) {
  return alpha / 8.0 * (2.0 + gamma / 2.0 - 1.0 / alpha);
}

double theorem_bound(double alpha, double gamma, double p) {
  return std::pow(p, ((22.0 - gamma / 2.0) * alpha + 1.0) / 8.0);
}

}  // namespace fflab
