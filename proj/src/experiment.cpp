#include "fflab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fflab/additive.hpp"
#include "fflab/expander.hpp"
#include "fflab/incidence.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fflab {

using json = nlohmann::ordered_json;

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// MapSpec / ExtractorSpec <-> JSON
// ---------------------------------------------------------------------------

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!j.is_object())
    throw ConfigInvalid(where + ": expected a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (k == a) ok = true;
    if (!ok) throw ConfigInvalid(where + ": unknown field '" + k + "'");
  }
}

json poly_to_json(const IntPoly& p) { return json(p.coeffs()); }

IntPoly poly_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigInvalid(where + ": expected an array");
  std::vector<long long> c;
  for (const auto& v : j) {
    if (!v.is_number_integer())
      throw ConfigInvalid(where + ": coefficients must be integers");
    c.push_back(v.get<long long>());
  }
  return IntPoly(std::move(c));
}

json map_to_json(const MapSpec& s) {
  json terms = json::array();
  for (const auto& t : s.terms) {
    json jt;
    jt["coeff"] = t.coeff;
    json pw = json::array();
    for (int i = 0; i < s.arity; ++i) pw.push_back(t.powers[i]);
    jt["powers"] = pw;
    bool anyPoly = false;
    for (int i = 0; i < s.arity; ++i)
      if (t.polyFactors[i]) anyPoly = true;
    if (anyPoly) {
      json ps = json::array();
      for (int i = 0; i < s.arity; ++i)
        ps.push_back(t.polyFactors[i] ? poly_to_json(*t.polyFactors[i])
                                      : json(nullptr));
      jt["polys"] = ps;
    }
    if (t.genExponent) {
      json g;
      g["constant"] = t.genExponent->constant;
      json cs = json::array();
      for (int i = 0; i < s.arity; ++i) cs.push_back(t.genExponent->coeff[i]);
      g["coeffs"] = cs;
      jt["gen"] = g;
    }
    terms.push_back(jt);
  }
  return json{{"arity", s.arity}, {"terms", terms}};
}

MapSpec map_from_json(const json& j, const std::string& where) {
  reject_unknown(j, {"arity", "terms"}, where);
  if (!j.contains("arity") || !j.contains("terms"))
    throw ConfigInvalid(where + ": needs 'arity' and 'terms'");
  MapSpec s;
  s.arity = j["arity"].get<int>();
  if (s.arity < 1 || s.arity > 3)
    throw ConfigInvalid(where + ": arity must be 1..3");
  for (const auto& jt : j["terms"]) {
    reject_unknown(jt, {"coeff", "powers", "polys", "gen"}, where + ".term");
    MapTerm t;
    if (jt.contains("coeff")) t.coeff = jt["coeff"].get<long long>();
    if (jt.contains("powers")) {
      const auto& pw = jt["powers"];
      if (static_cast<int>(pw.size()) != s.arity)
        throw ConfigInvalid(where + ": powers length must equal arity");
      for (int i = 0; i < s.arity; ++i) t.powers[i] = pw[i].get<unsigned>();
    }
    if (jt.contains("polys")) {
      const auto& ps = jt["polys"];
      if (static_cast<int>(ps.size()) != s.arity)
        throw ConfigInvalid(where + ": polys length must equal arity");
      for (int i = 0; i < s.arity; ++i)
        if (!ps[i].is_null())
          t.polyFactors[i] = poly_from_json(ps[i], where + ".polys");
    }
    if (jt.contains("gen")) {
      reject_unknown(jt["gen"], {"constant", "coeffs"}, where + ".gen");
      LinearForm lf;
      lf.constant = jt["gen"].value("constant", 0ll);
      if (jt["gen"].contains("coeffs")) {
        const auto& cs = jt["gen"]["coeffs"];
        if (static_cast<int>(cs.size()) != s.arity)
          throw ConfigInvalid(where + ": gen coeffs length must equal arity");
        for (int i = 0; i < s.arity; ++i) lf.coeff[i] = cs[i].get<long long>();
      }
      t.genExponent = lf;
    }
    s.terms.push_back(std::move(t));
  }
  return s;
}

json extractor_to_json(const ExtractorSpec& s) {
  json j;
  j["a"] = poly_to_json(s.a);
  j["b"] = poly_to_json(s.b);
  j["g"] = poly_to_json(s.g);
  if (!s.h.terms.empty()) j["h"] = map_to_json(s.h);
  return j;
}

ExtractorSpec extractor_from_json(const json& j, const std::string& where) {
  reject_unknown(j, {"a", "b", "g", "h"}, where);
  ExtractorSpec s;
  if (j.contains("a")) s.a = poly_from_json(j["a"], where + ".a");
  if (j.contains("b")) s.b = poly_from_json(j["b"], where + ".b");
  if (j.contains("g")) s.g = poly_from_json(j["g"], where + ".g");
  if (j.contains("h")) s.h = map_from_json(j["h"], where + ".h");
  s.validate();
  return s;
}

const std::vector<std::string> kKinds = {
    "expander", "incidence", "extractor", "sarkozy",
    "multtable", "weil",      "wellspaced"};

std::vector<std::uint64_t> primes_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigInvalid("primes: expected a nonempty array");
  std::vector<std::uint64_t> ps;
  for (const auto& v : j) {
    const std::uint64_t p = v.get<std::uint64_t>();
    if (p < 3 || !is_prime(p))
      throw ConfigInvalid("primes: " + std::to_string(p) +
                          " is not an odd prime");
    ps.push_back(p);
  }
  return ps;
}

}  // namespace

ExperimentConfig parse_config(const std::string& jsonText) {
  json j;
  try {
    j = json::parse(jsonText);
  } catch (const std::exception& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigInvalid("config must be an object with a 'kind' field");

  ExperimentConfig c;
  c.kind = j["kind"].get<std::string>();
  if (std::find(kKinds.begin(), kKinds.end(), c.kind) == kKinds.end())
    throw ConfigInvalid("unknown experiment kind '" + c.kind + "'");

  if (c.kind == "expander") {
    reject_unknown(j, {"kind", "seed", "overrideBudget", "primes", "alpha",
                       "trials", "map"},
                   "config");
    if (!j.contains("primes") || !j.contains("map"))
      throw ConfigInvalid("expander config needs 'primes' and 'map'");
    c.primes = primes_from_json(j["primes"]);
    c.alpha = j.value("alpha", 0.5);
    c.trials = j.value("trials", 1ull);
    c.map = map_from_json(j["map"], "map");
    if (c.map.arity != 2)
      throw ConfigInvalid("expander map must have arity 2");
  } else if (c.kind == "incidence") {
    reject_unknown(j, {"kind", "seed", "overrideBudget", "primes", "dims",
                       "instances", "maxSetSize"},
                   "config");
    if (!j.contains("primes"))
      throw ConfigInvalid("incidence config needs 'primes'");
    c.primes = primes_from_json(j["primes"]);
    c.dims = j.value("dims", std::vector<int>{2});
    for (int d : c.dims)
      if (d < 2) throw ConfigInvalid("dims entries must be >= 2");
    c.instances = j.value("instances", 1ull);
    c.maxSetSize = j.value("maxSetSize", 8ull);
  } else if (c.kind == "extractor") {
    reject_unknown(j, {"kind", "seed", "overrideBudget", "primes", "alphas",
                       "trials", "extractor"},
                   "config");
    if (!j.contains("primes") || !j.contains("alphas"))
      throw ConfigInvalid("extractor config needs 'primes' and 'alphas'");
    c.primes = primes_from_json(j["primes"]);
    c.alphas = j["alphas"].get<std::vector<double>>();
    for (double a : c.alphas)
      if (a <= 0.0 || a >= 1.0)
        throw ConfigInvalid("alphas must lie in (0,1)");
    c.trials = j.value("trials", 1ull);
    if (j.contains("extractor"))
      c.extractor = extractor_from_json(j["extractor"], "extractor");
  } else if (c.kind == "sarkozy") {
    reject_unknown(j, {"kind", "seed", "overrideBudget", "primes", "instances",
                       "maxSetSize"},
                   "config");
    if (!j.contains("primes"))
      throw ConfigInvalid("sarkozy config needs 'primes'");
    c.primes = primes_from_json(j["primes"]);
    c.instances = j.value("instances", 1ull);
    c.maxSetSize = j.value("maxSetSize", 8ull);
  } else if (c.kind == "multtable") {
    reject_unknown(j, {"kind", "seed", "overrideBudget", "ns"}, "config");
    if (!j.contains("ns") || !j["ns"].is_array() || j["ns"].empty())
      throw ConfigInvalid("multtable config needs a nonempty 'ns' array");
    c.ns = j["ns"].get<std::vector<std::uint64_t>>();
  } else if (c.kind == "weil") {
    reject_unknown(j, {"kind", "seed", "overrideBudget", "primes", "polys"},
                   "config");
    if (!j.contains("primes") || !j.contains("polys"))
      throw ConfigInvalid("weil config needs 'primes' and 'polys'");
    c.primes = primes_from_json(j["primes"]);
    for (const auto& pj : j["polys"])
      c.polys.push_back(poly_from_json(pj, "polys").coeffs());
    if (c.polys.empty()) throw ConfigInvalid("polys must be nonempty");
  } else {  // wellspaced
    reject_unknown(j, {"kind", "seed", "overrideBudget", "primes", "alpha",
                       "instances", "map", "intervalL"},
                   "config");
    if (!j.contains("primes") || !j.contains("map"))
      throw ConfigInvalid("wellspaced config needs 'primes' and 'map'");
    c.primes = primes_from_json(j["primes"]);
    c.alpha = j.value("alpha", 0.5);
    c.instances = j.value("instances", 1ull);
    c.map = map_from_json(j["map"], "map");
    if (c.map.arity != 3)
      throw ConfigInvalid("wellspaced map must have arity 3");
    c.intervalL = j.value("intervalL", 0ull);
  }
  c.seed = j.value("seed", 0ull);
  c.overrideBudget = j.value("overrideBudget", false);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["kind"] = c.kind;
  if (c.kind == "expander") {
    j["primes"] = c.primes;
    j["alpha"] = c.alpha;
    j["trials"] = c.trials;
    j["map"] = map_to_json(c.map);
  } else if (c.kind == "incidence") {
    j["primes"] = c.primes;
    j["dims"] = c.dims;
    j["instances"] = c.instances;
    j["maxSetSize"] = c.maxSetSize;
  } else if (c.kind == "extractor") {
    j["primes"] = c.primes;
    j["alphas"] = c.alphas;
    j["trials"] = c.trials;
    j["extractor"] = extractor_to_json(c.extractor);
  } else if (c.kind == "sarkozy") {
    j["primes"] = c.primes;
    j["instances"] = c.instances;
    j["maxSetSize"] = c.maxSetSize;
  } else if (c.kind == "multtable") {
    j["ns"] = c.ns;
  } else if (c.kind == "weil") {
    j["primes"] = c.primes;
    j["polys"] = c.polys;
  } else {
    j["primes"] = c.primes;
    j["alpha"] = c.alpha;
    j["instances"] = c.instances;
    j["map"] = map_to_json(c.map);
    if (c.intervalL) j["intervalL"] = c.intervalL;
  }
  j["seed"] = c.seed;
  j["overrideBudget"] = c.overrideBudget;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Experiment implementations
// ---------------------------------------------------------------------------

namespace {

std::string cell(std::uint64_t v) { return std::to_string(v); }
std::string cell(long long v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(double v) { return format_real(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

void run_expander(const ExperimentConfig& c, ExperimentReport& rep) {
  rep.columns = {"p",      "alpha",        "trial", "sizeA", "sizeB",
                 "imageSize", "energy", "csLowerBound", "ratio"};
  const auto r =
      expansion_report(c.map, c.alpha, c.primes, c.trials, c.seed, nullptr);
  for (const auto& s : r.samples)
    rep.rows.push_back({cell(s.p), cell(s.alpha), cell(s.trial), cell(s.sizeA),
                        cell(s.sizeB), cell(s.imageSize), cell(s.energy),
                        cell(s.csLowerBound), cell(s.ratio)});
  json summary;
  summary["kappaHat"] = r.kappaHat ? json(*r.kappaHat) : json(nullptr);
  summary["skippedBadPrimes"] = r.skippedBadPrimes;
  rep.summaryJson = summary.dump();
}

void run_incidence(const ExperimentConfig& c, ExperimentReport& rep) {
  rep.columns = {"p",     "d",         "instance",  "sizeP",
                 "sizeH", "count",     "vinhMain",  "vinhError",
                 "holds", "twoSided",  "slack"};
  std::uint64_t violations = 0;
  double maxRatio = 0.0;
  for (std::uint64_t p : c.primes) {
    const PrimeField F(p);
    for (int d : c.dims) {
      SplitMix64 rng(c.seed ^ (p * 0x9e3779b97f4a7c15ull) ^
                     static_cast<std::uint64_t>(d));
      for (std::uint64_t inst = 0; inst < c.instances; ++inst) {
        const std::uint64_t nP = 1 + rng.below(c.maxSetSize);
        const std::uint64_t nH = 1 + rng.below(c.maxSetSize);
        PointSet P(F, d);
        for (std::uint64_t i = 0; i < nP; ++i) {
          Point pt(d);
          for (auto& x : pt) x = rng.below(p);
          P.insert(std::move(pt));
        }
        HyperplaneSet H(F, d);
        for (std::uint64_t i = 0; i < nH; ++i) {
          std::vector<std::uint64_t> a(d);
          do {
            for (auto& x : a) x = rng.below(p);
          } while (std::all_of(a.begin(), a.end(),
                               [](std::uint64_t x) { return x == 0; }));
          H.insert(a, rng.below(p));
        }
        const IncidenceResult r = incidence_count(P, H);
        const bool holds = double(r.count) <= r.vinhMain + r.vinhError;
        const bool twoSided =
            std::abs(double(r.count) - r.vinhMain) <= r.vinhError;
        if (!holds) ++violations;
        const double bound = r.vinhMain + r.vinhError;
        if (bound > 0) maxRatio = std::max(maxRatio, double(r.count) / bound);
        rep.rows.push_back({cell(p), cell(d), cell(inst), cell(P.size()),
                            cell(H.size()), cell(r.count), cell(r.vinhMain),
                            cell(r.vinhError), cell(holds), cell(twoSided),
                            cell(r.slack)});
      }
    }
  }
  json summary;
  summary["violations"] = violations;
  summary["maxBoundRatio"] = maxRatio;
  rep.summaryJson = summary.dump();
}

void run_extractor(const ExperimentConfig& c, ExperimentReport& rep) {
  rep.columns = {"alpha", "p", "trial", "setSize", "maxNontrivialNorm",
                 "sgnSinNorm"};
  const auto scan = entropy_scan(c.extractor, c.alphas, c.primes, c.trials,
                                 c.seed, c.overrideBudget);
  for (const auto& r : scan.rows)
    rep.rows.push_back({cell(r.alpha), cell(r.p), cell(r.trial),
                        cell(r.setSize), cell(r.maxNontrivialNorm),
                        cell(r.sgnSinNorm)});
  json eh = json::array();
  for (const auto& [a, e] : scan.epsilonHat)
    eh.push_back({{"alpha", a},
                  {"value", std::isnan(e) ? json(nullptr) : json(e)}});
  json summary;
  summary["epsilonHat"] = eh;
  rep.summaryJson = summary.dump();
}

void run_sarkozy(const ExperimentConfig& c, ExperimentReport& rep) {
  rep.columns = {"p",     "instance", "sizeA",    "sizeB",    "sizeC",
                 "sizeD", "count",    "expected", "deviation"};
  std::uint64_t unsolvableAboveThreshold = 0;
  for (std::uint64_t p : c.primes) {
    const PrimeField F(p);
    SplitMix64 rng(c.seed ^ (p * 0x9e3779b97f4a7c15ull));
    const std::uint64_t cap = std::min(c.maxSetSize, p);
    for (std::uint64_t inst = 0; inst < c.instances; ++inst) {
      const FpSet A = sample_subset(F, 1 + rng.below(cap), rng.next());
      const FpSet B = sample_subset(F, 1 + rng.below(cap), rng.next());
      const FpSet C = sample_subset(F, 1 + rng.below(cap), rng.next());
      const FpSet D = sample_subset(F, 1 + rng.below(cap), rng.next());
      const EquationCount e = sarkozy_count(A, B, C, D);
      if (e.expectedNum > p * p * p && e.n == 0) ++unsolvableAboveThreshold;
      rep.rows.push_back({cell(p), cell(inst), cell(A.size()), cell(B.size()),
                          cell(C.size()), cell(D.size()), cell(e.n),
                          cell(e.expected()), cell(e.deviation())});
    }
  }
  json summary;
  summary["unsolvableAboveThreshold"] = unsolvableAboveThreshold;
  rep.summaryJson = summary.dump();
}

void run_multtable(const ExperimentConfig& c, ExperimentReport& rep) {
  rep.columns = {"n", "M", "ratio", "tenenbaumDelta"};
  for (std::uint64_t n : c.ns) {
    const MultTable t = mult_table(n, c.overrideBudget);
    rep.rows.push_back(
        {cell(t.n), cell(t.m), cell(t.ratio), cell(t.tenenbaumDelta)});
  }
  json summary;
  summary["count"] = c.ns.size();
  rep.summaryJson = summary.dump();
}

void run_weil(const ExperimentConfig& c, ExperimentReport& rep) {
  rep.columns = {"p", "degF", "h", "absS", "bound", "slack"};
  std::uint64_t violations = 0, skippedDegenerate = 0;
  for (std::uint64_t p : c.primes) {
    const PrimeField F(p);
    for (const auto& coeffs : c.polys) {
      const IntPoly f{std::vector<long long>(coeffs)};
      if (f.constant_mod(F)) {
        ++skippedDegenerate;
        continue;
      }
      for (std::uint64_t h = 1; h < p; ++h) {
        const WeilCheck w = weil_bound_check(f, h, F);
        if (!w.holds) ++violations;
        rep.rows.push_back({cell(p), cell(f.degree_mod(F)), cell(h),
                            cell(w.absSum), cell(w.bound),
                            cell(w.bound - w.absSum)});
      }
    }
  }
  json summary;
  summary["violations"] = violations;
  summary["skippedDegenerate"] = skippedDegenerate;
  rep.summaryJson = summary.dump();
}

void run_wellspaced(const ExperimentConfig& c, ExperimentReport& rep) {
  rep.columns = {"p", "instance", "setSize", "u", "L", "nonempty", "T"};
  std::uint64_t tPositiveViolations = 0;
  for (std::uint64_t p : c.primes) {
    const PrimeField F(p);
    SplitMix64 rng(c.seed ^ (p * 0x9e3779b97f4a7c15ull));
    const std::uint64_t m = std::clamp<std::uint64_t>(
        static_cast<std::uint64_t>(std::pow(double(p), c.alpha)), 1, p);
    const std::uint64_t L =
        c.intervalL
            ? std::min(c.intervalL, p)
            : std::max<std::uint64_t>(
                  1, static_cast<std::uint64_t>(
                         std::ceil(std::pow(double(p), 0.75))));
    for (std::uint64_t inst = 0; inst < c.instances; ++inst) {
      const FpSet A = sample_subset(F, m, rng.next());
      const FpSet B = sample_subset(F, m, rng.next());
      const FpSet C = sample_subset(F, m, rng.next());
      const std::uint64_t u = rng.below(p);
      const WellSpacedResult r =
          well_spaced_check(c.map, A, B, C, u, L, c.overrideBudget);
      if (r.T > 0 && !r.nonempty) ++tPositiveViolations;
      rep.rows.push_back({cell(p), cell(inst), cell(m), cell(u), cell(L),
                          cell(r.nonempty), cell(r.T)});
    }
  }
  json summary;
  summary["tPositiveViolations"] = tPositiveViolations;
  rep.summaryJson = summary.dump();
}

}  // namespace

ExperimentReport run(const ExperimentConfig& config) {
#ifdef _OPENMP
  if (const char* env = std::getenv("FFEXPAND_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.config = config;
  if (config.kind == "expander")
    run_expander(config, rep);
  else if (config.kind == "incidence")
    run_incidence(config, rep);
  else if (config.kind == "extractor")
    run_extractor(config, rep);
  else if (config.kind == "sarkozy")
    run_sarkozy(config, rep);
  else if (config.kind == "multtable")
    run_multtable(config, rep);
  else if (config.kind == "weil")
    run_weil(config, rep);
  else if (config.kind == "wellspaced")
    run_wellspaced(config, rep);
  else
    throw ConfigInvalid("unknown experiment kind '" + config.kind + "'");
  rep.wallMs = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  return rep;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

std::string report_csv(const ExperimentReport& report) {
  std::string out;
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out += ',';
    out += report.columns[i];
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string report_json(const ExperimentReport& report, bool includeMeta) {
  json j;
  j["config"] = json::parse(serialize_config(report.config));
  j["columns"] = report.columns;
  j["rows"] = report.rows;
  j["summary"] = json::parse(report.summaryJson);
  if (includeMeta) j["meta"] = {{"wallMs", report.wallMs}};
  return j.dump(2) + "\n";
}

std::vector<std::string> emit(const ExperimentReport& report,
                              EmitFormat format, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create output directory " + dir);
  std::vector<std::string> written;
  auto write = [&](const std::string& name, const std::string& data) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    out << data;
    if (!out) throw IoFailure("write failed for " + path);
    written.push_back(path);
  };
  if (format == EmitFormat::Csv || format == EmitFormat::Both)
    write(report.config.kind + ".csv", report_csv(report));
  if (format == EmitFormat::Json || format == EmitFormat::Both)
    write(report.config.kind + ".json", report_json(report));
  return written;
}

}  // namespace fflab
