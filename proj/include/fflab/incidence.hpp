#pragma once

#include <variant>
#include <vector>

#include "fflab/expander.hpp"
#include "fflab/field.hpp"

namespace fflab {

using Point = std::vector<std::uint64_t>;

// Deduplicated set of points in F_p^d.
class PointSet {
 public:
  PointSet(const PrimeField& F, int d) : field_(&F), d_(d) {
    if (d < 2) throw DimensionMismatch("dimension must be >= 2");
  }

  const PrimeField& field() const { return *field_; }
  int dim() const { return d_; }
  const std::vector<Point>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }

  // Inserts if not already present; coordinates reduced mod p.
  void insert(Point pt);

 private:
  const PrimeField* field_;
  int d_;
  std::vector<Point> pts_;
  std::vector<Point> sorted_;  // kept sorted for dedup
};

// Hyperplane sum a_i x_i = c with a != 0, normalized so the first nonzero
// a_i equals 1. Representation is unique.
struct Hyperplane {
  std::vector<std::uint64_t> a;
  std::uint64_t c = 0;
  auto operator<=>(const Hyperplane&) const = default;
};

class HyperplaneSet {
 public:
  HyperplaneSet(const PrimeField& F, int d) : field_(&F), d_(d) {
    if (d < 2) throw DimensionMismatch("dimension must be >= 2");
  }

  const PrimeField& field() const { return *field_; }
  int dim() const { return d_; }
  const std::vector<Hyperplane>& planes() const { return planes_; }
  std::size_t size() const { return planes_.size(); }

  // Normalizes, then inserts if not already present.
  void insert(std::vector<std::uint64_t> a, std::uint64_t c);

  Hyperplane normalize(std::vector<std::uint64_t> a, std::uint64_t c) const;

  // Convenience for d = 2: the line y = m x + b.
  void insert_line_slope(std::uint64_t m, std::uint64_t b);
  // Convenience for d = 2: the vertical line x = c.
  void insert_line_vertical(std::uint64_t c);

 private:
  const PrimeField* field_;
  int d_;
  std::vector<Hyperplane> planes_;
  std::vector<Hyperplane> sorted_;
};

struct IncidenceResult {
  std::uint64_t count = 0;
  double vinhMain = 0.0;   // |P||H|/p
  double vinhError = 0.0;  // p^{(d-1)/2} sqrt(|P||H|)
  double slack = 0.0;      // vinhMain + vinhError - count
};

// Exact incidence count (OpenMP-parallel over planes).
IncidenceResult incidence_count(const PointSet& P, const HyperplaneSet& H);
// Serial reference, kept for testing and benchmarking.
IncidenceResult incidence_count_serial(const PointSet& P,
                                       const HyperplaneSet& H);

struct VinhCheck {
  bool holds = false;          // N <= |P||H|/p + error term
  bool twoSidedHolds = false;  // |N - |P||H|/p| <= error term
  double slack = 0.0;
};

VinhCheck vinh_check(const PointSet& P, const HyperplaneSet& H);

struct BktReport {
  std::uint64_t count = 0;
  double logpN = 0.0;       // log_p N (0 when N <= 1)
  double reference = 0.0;   // (3/2) * beta
};

BktReport bkt_exponent_report(const PointSet& P, const HyperplaneSet& lines,
                              double beta);

// Line-family constructions from the expander/extractor proofs.
struct Sec3Lines {
  ExpanderSpec spec;
};
struct Sec5Lines {
  std::uint64_t t = 0;
};
using LineMode = std::variant<Sec3Lines, Sec5Lines>;

// Sec3: the lines l_{x1,x2} of the collision equation, deduplicated.
// Sec5: the lines in the (xi1, xi'2)-plane for fixed t; exactly |A|^2 - |A|
// of them, pairwise distinct.
HyperplaneSet lines_from_expander_pairs(const FpSet& A, const LineMode& mode);

}  // namespace fflab
