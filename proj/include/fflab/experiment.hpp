#pragma once

#include <string>
#include <vector>

#include "fflab/extractor.hpp"
#include "fflab/field.hpp"

namespace fflab {

// Experiment kinds: expander | incidence | extractor | sarkozy | multtable |
// weil | wellspaced. One struct carries every kind's parameters; parsing
// enforces the per-kind key whitelist, so unknown or misplaced fields are
// rejected.
struct ExperimentConfig {
  std::string kind;
  std::uint64_t seed = 0;
  bool overrideBudget = false;

  std::vector<std::uint64_t> primes;
  std::uint64_t trials = 1;
  std::uint64_t instances = 1;
  std::uint64_t maxSetSize = 8;

  double alpha = 0.5;           // expander, wellspaced
  std::vector<double> alphas;   // extractor grid

  MapSpec map{2, {}};           // expander, wellspaced
  ExtractorSpec extractor;      // extractor

  std::vector<std::vector<long long>> polys;  // weil pool
  std::vector<std::uint64_t> ns;              // multtable
  std::vector<int> dims;                      // incidence
  std::uint64_t intervalL = 0;  // wellspaced; 0 = derive from p

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& jsonText);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& c);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // cells pre-formatted
  std::string summaryJson;  // stable-ordered JSON object
  double wallMs = 0.0;      // meta only; excluded from determinism contracts
};

// Executes the configured experiment. Identical config and seed yield an
// identical report payload (wallMs excluded).
ExperimentReport run(const ExperimentConfig& config);

enum class EmitFormat { Csv, Json, Both };

// Writes <dir>/<kind>.csv and/or <dir>/<kind>.json; returns written paths.
std::vector<std::string> emit(const ExperimentReport& report,
                              EmitFormat format, const std::string& dir);

// Serialization helpers shared by emit and the determinism tests.
std::string report_csv(const ExperimentReport& report);
std::string report_json(const ExperimentReport& report,
                        bool includeMeta = true);

// Fixed-width real formatting used in every report: 12 significant digits,
// decimal dot.
std::string format_real(double v);

}  // namespace fflab
