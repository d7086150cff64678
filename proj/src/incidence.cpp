#include "fflab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fflab {

void PointSet::insert(Point pt) {
  if (static_cast<int>(pt.size()) != d_)
    throw DimensionMismatch("point dimension mismatch");
  for (auto& x : pt) x %= field_->p();
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), pt);
  if (it != sorted_.end() && *it == pt) return;
  sorted_.insert(it, pt);
  pts_.push_back(std::move(pt));
}

Hyperplane HyperplaneSet::normalize(std::vector<std::uint64_t> a,
                                    std::uint64_t c) const {
  if (static_cast<int>(a.size()) != d_)
    throw DimensionMismatch("hyperplane dimension mismatch");
  const PrimeField& F = *field_;
  for (auto& x : a) x %= F.p();
  c %= F.p();
  auto lead = std::find_if(a.begin(), a.end(),
                           [](std::uint64_t x) { return x != 0; });
  if (lead == a.end()) throw Error("hyperplane needs a nonzero normal");
  const std::uint64_t s = F.inv(*lead);
  for (auto& x : a) x = F.mul(x, s);
  return Hyperplane{std::move(a), F.mul(c, s)};
}

void HyperplaneSet::insert(std::vector<std::uint64_t> a, std::uint64_t c) {
  Hyperplane h = normalize(std::move(a), c);
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), h);
  if (it != sorted_.end() && *it == h) return;
  sorted_.insert(it, h);
  planes_.push_back(std::move(h));
}

void HyperplaneSet::insert_line_slope(std::uint64_t m, std::uint64_t b) {
  // y = m x + b  <=>  (-m) x + y = b
  insert({field_->neg(m % field_->p()), 1}, b);
}

void HyperplaneSet::insert_line_vertical(std::uint64_t c) {
  insert({1, 0}, c);
}

// ---------------------------------------------------------------------------
// Incidence counting
// ---------------------------------------------------------------------------

namespace {

void check_compatible(const PointSet& P, const HyperplaneSet& H) {
  if (P.field().p() != H.field().p())
    throw FieldMismatch("point set and plane set live in different fields");
  if (P.dim() != H.dim())
    throw DimensionMismatch("point set and plane set dimension mismatch");
}

bool incident(const PrimeField& F, const Point& pt, const Hyperplane& h) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < pt.size(); ++i)
    s = F.add(s, F.mul(h.a[i], pt[i]));
  return s == h.c;
}

IncidenceResult finish(const PointSet& P, const HyperplaneSet& H,
                       std::uint64_t n) {
  IncidenceResult r;
  r.count = n;
  const double p = double(P.field().p());
  const double ph = double(P.size()) * double(H.size());
  r.vinhMain = ph / p;
  r.vinhError = std::pow(p, (P.dim() - 1) / 2.0) * std::sqrt(ph);
  r.slack = r.vinhMain + r.vinhError - double(n);
  return r;
}

}  // namespace

IncidenceResult incidence_count_serial(const PointSet& P,
                                       const HyperplaneSet& H) {
  check_compatible(P, H);
  const PrimeField& F = P.field();
  std::uint64_t n = 0;
  for (const auto& h : H.planes())
    for (const auto& pt : P.points())
      if (incident(F, pt, h)) ++n;
  return finish(P, H, n);
}

IncidenceResult incidence_count(const PointSet& P, const HyperplaneSet& H) {
  check_compatible(P, H);
  const PrimeField& F = P.field();
  const auto& planes = H.planes();
  const auto& pts = P.points();
  std::uint64_t n = 0;
#pragma omp parallel for reduction(+ : n) schedule(static)
  for (long long i = 0; i < static_cast<long long>(planes.size()); ++i) {
    std::uint64_t local = 0;
    for (const auto& pt : pts)
      if (incident(F, pt, planes[i])) ++local;
    n += local;
  }
  return finish(P, H, n);
}

VinhCheck vinh_check(const PointSet& P, const HyperplaneSet& H) {
  const IncidenceResult r = incidence_count(P, H);
  VinhCheck v;
  const double bound = r.vinhMain + r.vinhError;
  v.holds = double(r.count) <= bound;
  v.twoSidedHolds = std::abs(double(r.count) - r.vinhMain) <= r.vinhError;
  v.slack = bound - double(r.count);
  return v;
}

BktReport bkt_exponent_report(const PointSet& P, const HyperplaneSet& lines,
                              double beta) {
  check_compatible(P, lines);
  if (P.dim() != 2) throw DimensionMismatch("BKT regime is planar (d = 2)");
  const double p = double(P.field().p());
  if (double(lines.size()) >= std::pow(p, beta))
    throw BetaViolated("|H| >= p^beta");
  BktReport rep;
  rep.count = incidence_count(P, lines).count;
  rep.logpN = rep.count > 1 ? std::log(double(rep.count)) / std::log(p) : 0.0;
  rep.reference = 1.5 * beta;
  return rep;
}

// ---------------------------------------------------------------------------
// Line families from the expander proofs
// ---------------------------------------------------------------------------

HyperplaneSet lines_from_expander_pairs(const FpSet& A, const LineMode& mode) {
  const PrimeField& F = A.field();
  HyperplaneSet out(F, 2);
  const auto as = A.members();

  if (const auto* m3 = std::get_if<Sec3Lines>(&mode)) {
    const ExpanderSpec& spec = m3->spec;
    if (spec.bad_prime(F))
      throw BadPrime("f is affinely dependent on x^k mod p");
    const IntPoly fr = spec.f.reduced(F);
    const std::uint64_t e = factorial_exponent(
        spec.k, static_cast<std::uint64_t>(fr.degree_mod(F)), F);
    auto xpow = [&](std::uint64_t x) { return x == 0 ? 0 : F.pow(x, e); };
    for (std::uint64_t x1 : as) {
      for (std::uint64_t x2 : as) {
        if (xpow(x1) == xpow(x2)) continue;  // restrict to the X-set
        const std::uint64_t a1 = F.pow(x1, spec.k);
        const std::uint64_t a2 = F.neg(F.pow(x2, spec.k));
        if (a1 == 0 && a2 == 0) continue;
        out.insert({a1, a2}, F.sub(fr.eval(F, x2), fr.eval(F, x1)));
      }
    }
    return out;
  }

  const std::uint64_t t = std::get<Sec5Lines>(mode).t;
  // xi'_2 = 2(x1-x2+t) xi_1 - (x1-x2+t)^2 + x1^2 - x2^2 + t^2
  for (std::uint64_t x1 : as) {
    for (std::uint64_t x2 : as) {
      if (x1 == x2) continue;
      const std::uint64_t s = F.add(F.sub(x1, x2), t);
      const std::uint64_t slope = F.mul(2 % F.p(), s);
      std::uint64_t c = F.sub(F.mul(x1, x1), F.mul(x2, x2));
      c = F.add(c, F.mul(t, t));
      c = F.sub(c, F.mul(s, s));
      // slope*xi1 - xi'2 = -c
      out.insert({slope, F.neg(1)}, F.neg(c));
    }
  }
  return out;
}

}  // namespace fflab
