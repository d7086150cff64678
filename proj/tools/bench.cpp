// Compares the parallel kernels against their serial references.

#include <cstdio>
#include <cstdlib>

#include "fflab/expander.hpp"
#include "fflab/extractor.hpp"
#include "fflab/incidence.hpp"

#ifdef _OPENMP
#include <omp.h>
static double now() { return omp_get_wtime(); }
#else
#include <chrono>
static double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}
#endif

using namespace fflab;

namespace {

template <class Fn>
double time_best(Fn&& fn, int reps = 3) {
  double best = 1e30;
  for (int i = 0; i < reps; ++i) {
    const double t0 = now();
    fn();
    best = std::min(best, now() - t0);
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
              name, serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t p = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4999;
  const PrimeField F(p);
#ifdef _OPENMP
  std::printf("p = %llu, %d threads\n", (unsigned long long)p,
              omp_get_max_threads());
#else
  std::printf("p = %llu, OpenMP disabled\n", (unsigned long long)p);
#endif

  const FpSet A = sample_subset(F, std::min<std::uint64_t>(p, 600), 1);
  const FpSet B = sample_subset(F, std::min<std::uint64_t>(p, 600), 2);
  const FpSet C = sample_subset(F, std::min<std::uint64_t>(p, 600), 3);

  {
    const ExtractorSpec spec;
    const MapSpec m = spec.to_map_spec();
    std::vector<std::uint64_t> h1, h2;
    const double ts = time_best([&] { h1 = value_histogram_serial(m, A, B, C); });
    const double tp = time_best([&] { h2 = extractor_histogram(spec, A, B, C); });
    if (h1 != h2) {
      std::fprintf(stderr, "histogram mismatch\n");
      return 1;
    }
    report("value histogram", ts, tp);
  }

  {
    SplitMix64 rng(7);
    PointSet P(F, 2);
    HyperplaneSet H(F, 2);
    for (int i = 0; i < 2000; ++i) {
      P.insert({rng.below(p), rng.below(p)});
      H.insert_line_slope(rng.below(p), rng.below(p));
    }
    IncidenceResult r1, r2;
    const double ts = time_best([&] { r1 = incidence_count_serial(P, H); });
    const double tp = time_best([&] { r2 = incidence_count(P, H); });
    if (r1.count != r2.count) {
      std::fprintf(stderr, "incidence mismatch\n");
      return 1;
    }
    report("incidence count", ts, tp);
  }

  {
    const std::vector<std::uint64_t> hist =
        value_histogram(ExtractorSpec{}.to_map_spec(), A, B, C);
    SpectrumResult s1, s2;
    const double ts = time_best([&] { s1 = exp_sums_naive(hist, F); });
    const double tp = time_best([&] { s2 = exp_sums_fast(hist, F); });
    if (std::abs(s1.maxNontrivialAbs - s2.maxNontrivialAbs) >
        1e-6 * (1.0 + s1.maxNontrivialAbs)) {
      std::fprintf(stderr, "spectrum mismatch\n");
      return 1;
    }
    report("exponential sums", ts, tp);
  }

  return 0;
}
