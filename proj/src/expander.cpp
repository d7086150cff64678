#include "fflab/expander.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace fflab {

MapSpec ExpanderSpec::to_map_spec() const {
  MapSpec s;
  s.arity = 2;
  MapTerm tf;  // f(x)
  tf.polyFactors[0] = f;
  s.terms.push_back(std::move(tf));
  MapTerm tg;  // x^k g(y)
  tg.powers[0] = k;
  tg.polyFactors[1] = g;
  s.terms.push_back(std::move(tg));
  return s;
}

FpSet image_set(const MapSpec& spec, const FpSet& A, const FpSet& B) {
  require_same_field(A, B);
  if (A.empty() || B.empty()) throw Error("image_set: empty input set");
  const PrimeField& F = A.field();
  FpSet img(F);
  const auto as = A.members();
  const auto bs = B.members();
  for (std::uint64_t a : as)
    for (std::uint64_t b : bs) img.insert(eval_map(spec, F, {a, b}));
  return img;
}

std::vector<std::uint64_t> representation_counts(const MapSpec& spec,
                                                 const FpSet& A,
                                                 const FpSet& B) {
  require_same_field(A, B);
  if (A.empty() || B.empty())
    throw Error("representation_counts: empty input set");
  const PrimeField& F = A.field();
  std::vector<std::uint64_t> r(F.p(), 0);
  const auto as = A.members();
  const auto bs = B.members();
  for (std::uint64_t a : as)
    for (std::uint64_t b : bs) ++r[eval_map(spec, F, {a, b})];
  return r;
}

std::uint64_t collision_energy(const MapSpec& spec, const FpSet& A,
                               const FpSet& B) {
  const auto r = representation_counts(spec, A, B);
  std::uint64_t e = 0;
  for (std::uint64_t c : r) e += c * c;
  return e;
}

std::uint64_t cs_lower_bound(std::uint64_t sizeA, std::uint64_t sizeB,
                             std::uint64_t energy) {
  if (energy == 0) throw ZeroEnergy("cs_lower_bound: energy must be >= 1");
  unsigned __int128 num = static_cast<unsigned __int128>(sizeA) * sizeA;
  num *= static_cast<unsigned __int128>(sizeB) * sizeB;
  return static_cast<std::uint64_t>((num + energy - 1) / energy);
}

// ---------------------------------------------------------------------------
// X-set and line census
// ---------------------------------------------------------------------------

namespace {

// kd!-th power with the convention 0 -> 0 (the exponent is reduced mod p-1
// via Fermat, valid for nonzero bases; the true exponent k*d! is >= 1).
std::uint64_t reduced_power(const PrimeField& F, std::uint64_t x,
                            std::uint64_t e) {
  if (x == 0) return 0;
  return F.pow(x, e);
}

}  // namespace

LineCensus x_set_and_line_census(const ExpanderSpec& spec, const FpSet& A) {
  const PrimeField& F = A.field();
  if (spec.bad_prime(F))
    throw BadPrime("f is affinely dependent on x^k mod p");
  const IntPoly fr = spec.f.reduced(F);
  const std::uint64_t d = static_cast<std::uint64_t>(fr.degree_mod(F));
  const std::uint64_t e = factorial_exponent(spec.k, d, F);

  const auto as = A.members();
  LineCensus out;

  std::vector<std::uint64_t> pw(as.size()), xk(as.size()), fx(as.size());
  for (std::size_t i = 0; i < as.size(); ++i) {
    pw[i] = reduced_power(F, as[i], e);
    xk[i] = F.pow(as[i], spec.k);
    fx[i] = fr.eval(F, as[i]);
  }

  std::set<std::array<std::uint64_t, 3>> lines;
  for (std::size_t i = 0; i < as.size(); ++i) {
    for (std::size_t j = 0; j < as.size(); ++j) {
      if (pw[i] == pw[j]) continue;  // lines are censused over X only
      ++out.xSetSize;
      // Line l_{x1,x2} in the (y1,y2)-plane: x1^k y1 - x2^k y2 = f(x2)-f(x1).
      std::uint64_t a1 = xk[i];
      std::uint64_t a2 = F.neg(xk[j]);
      std::uint64_t c = F.sub(fx[j], fx[i]);
      if (a1 == 0 && a2 == 0) continue;  // x1 = x2 = 0, not a line
      const std::uint64_t lead = a1 != 0 ? a1 : a2;
      const std::uint64_t s = F.inv(lead);
      lines.insert({F.mul(a1, s), F.mul(a2, s), F.mul(c, s)});
    }
  }
  out.distinctLineCount = lines.size();
  return out;
}

// ---------------------------------------------------------------------------
// Expansion report
// ---------------------------------------------------------------------------

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<double> ls_slope(const std::vector<double>& x,
                               const std::vector<double>& y) {
  if (x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace

ExpansionReport expansion_report(const MapSpec& spec, double alpha,
                                 const std::vector<std::uint64_t>& primes,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const ExpanderSpec* badPrimeFilter) {
  if (trials < 1) throw Error("expansion_report: trials must be >= 1");
  ExpansionReport rep;
  std::vector<double> lnA, lnC;
  for (std::size_t pi = 0; pi < primes.size(); ++pi) {
    const PrimeField F(primes[pi]);
    if (badPrimeFilter && badPrimeFilter->bad_prime(F)) {
      rep.skippedBadPrimes.push_back(primes[pi]);
      continue;
    }
    const std::uint64_t m = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::pow(double(F.p()), alpha)));
    const std::uint64_t base = seed + 1000003ull * pi;
    std::vector<ExpansionSample> rows(trials);
#pragma omp parallel for schedule(dynamic)
    for (long long t = 0; t < static_cast<long long>(trials); ++t) {
      const FpSet A = sample_subset(F, m, base + 2 * t);
      const FpSet B = sample_subset(F, m, base + 2 * t + 1);
      const auto r = representation_counts(spec, A, B);
      ExpansionSample s;
      s.p = F.p();
      s.alpha = alpha;
      s.trial = t;
      s.sizeA = A.size();
      s.sizeB = B.size();
      for (std::uint64_t c : r) {
        if (c) ++s.imageSize;
        s.energy += c * c;
      }
      s.csLowerBound = cs_lower_bound(s.sizeA, s.sizeB, s.energy);
      s.ratio = double(s.imageSize) / double(s.sizeA);
      rows[t] = s;
    }
    std::vector<double> imgs;
    for (const auto& s : rows) imgs.push_back(double(s.imageSize));
    lnA.push_back(std::log(double(m)));
    lnC.push_back(std::log(median(imgs)));
    rep.samples.insert(rep.samples.end(), rows.begin(), rows.end());
  }
  rep.kappaHat = ls_slope(lnA, lnC);
  return rep;
}

// ---------------------------------------------------------------------------
// Counterexample constructions
// ---------------------------------------------------------------------------

WitnessSets non_expander_witness(const IntPoly& f, const IntPoly& g,
                                 const PrimeField& F, double alpha) {
  if (f.constant_mod(F) || g.constant_mod(F))
    throw DegenerateMap("f and g must be nonconstant mod p");
  const std::uint64_t p = F.p();
  const std::uint64_t Lh = std::min<std::uint64_t>(
      p, static_cast<std::uint64_t>(std::ceil(std::pow(double(p), alpha))));

  auto best_shift = [&](const IntPoly& poly) {
    std::vector<char> img(p, 0);
    for (std::uint64_t x = 0; x < p; ++x) img[poly.eval(F, x)] = 1;
    // Sliding-window count of |(a + [0,Lh)) ^ image| over all shifts a.
    std::uint64_t cnt = 0;
    for (std::uint64_t j = 0; j < Lh; ++j) cnt += img[j];
    std::uint64_t best = 0, bestCnt = cnt;
    for (std::uint64_t a = 1; a < p; ++a) {
      cnt -= img[a - 1];
      cnt += img[(a - 1 + Lh) % p];
      if (cnt > bestCnt) {
        bestCnt = cnt;
        best = a;
      }
    }
    return best;
  };

  WitnessSets w{FpSet(F), FpSet(F)};
  w.intervalLen = Lh;
  w.shiftA = best_shift(f);
  w.shiftB = best_shift(g);
  const FpInterval Ia{w.shiftA, Lh}, Ib{w.shiftB, Lh};
  for (std::uint64_t x = 0; x < p; ++x) {
    if (Ia.contains(F, f.eval(F, x))) w.A.insert(x);
    if (Ib.contains(F, g.eval(F, x))) w.B.insert(x);
  }
  return w;
}

BourgainWitness bourgain_counterexample(unsigned k, long long u,
                                        const PrimeField& F, std::uint64_t L) {
  const std::uint64_t p = F.p();
  if (double(L) >= std::sqrt(double(p)) / 2)
    throw IntervalTooLong("bourgain_counterexample requires L < sqrt(p)/2");
  if (L == 0) throw Error("L must be >= 1");

  const std::uint64_t m = p - 1;
  const std::uint64_t l = std::gcd<std::uint64_t>(k, m);
  const std::uint64_t g = F.generator();

  // Coset id of x = g^i w.r.t. the k-th power subgroup is i mod l.
  std::vector<std::uint32_t> cid(p, 0);
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i < m; ++i) {
    cid[x] = static_cast<std::uint32_t>(i % l);
    x = F.mul(x, g);
  }
  std::vector<std::uint64_t> perCoset(l, 0);
  for (std::uint64_t t = 1; t <= L; ++t) ++perCoset[cid[t]];
  const std::uint64_t best = static_cast<std::uint64_t>(
      std::max_element(perCoset.begin(), perCoset.end()) - perCoset.begin());
  const std::uint64_t a = F.pow(g, best);

  BourgainWitness w{FpSet(F), FpSet(F), a, L};
  for (std::uint64_t v = 0; v < p; ++v) {
    if (v != 0) {
      const std::uint64_t t = F.mul(a, F.pow(v, k));
      if (t >= 1 && t <= L) w.A.insert(v);
    }
  }
  const std::uint64_t ainv = F.inv(a);
  for (std::uint64_t t = 1; t <= L; ++t)
    w.B.insert(F.sub(F.mul(ainv, t), F.reduce(u)));
  return w;
}

ProductFormWitness product_form_counterexample(const IntPoly& f,
                                               const IntPoly& g,
                                               const PrimeField& F) {
  if (f.constant_mod(F) || g.constant_mod(F))
    throw DegenerateMap("f and g must be nonconstant mod p");
  const std::uint64_t p = F.p();
  const double sp = std::sqrt(double(p));
  const int kf = f.degree_mod(F);
  const int kg = g.degree_mod(F);
  const std::uint64_t L =
      static_cast<std::uint64_t>(std::ceil(double(f.degree()) * sp));
  if (L < 1) throw Error("p too small for the construction");

  ProductFormWitness w{FpSet(F), FpSet(F), L};
  const std::uint64_t hi = std::min<std::uint64_t>(2 * L - 1, p - 1);
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t fv = f.eval(F, x);
    if (fv >= 1 && fv <= hi) w.A.insert(x);
    const std::uint64_t gv = g.eval(F, x);
    if (gv >= 1 && gv <= hi) w.B.insert(x);
  }
  w.sizeAssertedA = double(L) - double(kf) * sp >= sp;
  w.sizeAssertedB = double(L) - double(kg) * sp >= sp;
  return w;
}

}  // namespace fflab
