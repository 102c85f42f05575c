#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ietlab/interval_exchange.hpp"
#include "ietlab/rauzy.hpp"
#include "ietlab/rigidity.hpp"

namespace ietlab {

// Monte Carlo stands in for "almost every": a census draws IETs from a
// class (or a fixed permutation), expands each, detects acceptable and
// expected rigidity events, and emits one reproducible record per sample.
// claims: dyadic-rigidity-density, rigidity-scarcity, rigidity-in-sparse-sets
struct SamplerConfig {
  // Exactly one of `perm` (fixed permutation) or `class_seed` (uniform
  // member of its Rauzy class) should be set.
  std::optional<Permutation> perm;
  std::optional<Permutation> class_seed;
  int denom_bits = 128;
  std::uint64_t seed = 0;
  long samples = 0;
  std::optional<Int> max_norm;
  std::optional<long> max_steps;
  std::vector<Rational> epsilons;
  DensityPredicate predicate = DensityPredicate::all();
  long predicate_horizon = 1 << 18;  // for the reported empirical density

  enum class DefectMode { none, expected, all };
  DefectMode defect_mode = DefectMode::expected;
  bool emit_events = true;
  int threads = 0;  // 0 = hardware concurrency
  int i_max = -1;   // dyadic window cap; -1 derives it from max_norm
};

// Deterministic per-(seed, index) draw; same inputs, same IET, bit for bit.
Iet sample_iet(const SamplerConfig& config, long index);

struct CensusDetection {
  long step = 0;       // expansion step n
  Int time;            // m = |C_max(M(S,n))|
  int dyadic = 0;
  DetectionSource source = DetectionSource::acceptable;
  int eps_index = -1;  // which epsilon (expected detections only)
  Rational defect;
  bool defect_known = false;
  bool in_predicate = false;
};

struct CensusRecord {
  long id = 0;
  std::uint64_t seed = 0;
  Permutation perm = Permutation::identity(2);
  Iet iet = rotation(Rational(1, 2));
  std::string word;
  std::vector<ExpansionEvent> events;  // empty unless emit_events
  std::vector<CensusDetection> detections;
  long tie_step = -1;
  // Per-epsilon dyadic coverage by expected detections.
  std::vector<std::vector<int>> dyadic_hits;
  std::vector<Rational> density_proxies;
  Rational predicate_density;
  std::string error;  // per-sample failure captured, never thrown
};

// Order-preserving parallel map over sample indices; the sink runs on the
// calling thread in index order.
void run_census(const SamplerConfig& config,
                const std::function<void(CensusRecord&&)>& sink);

std::vector<CensusRecord> run_census_collect(const SamplerConfig& config);

// JSONL persistence. Records serialize with stable field names and exact
// "p/q" fractions; identical configs produce byte-identical output.
std::string record_to_jsonl(const CensusRecord& rec,
                            const SamplerConfig& config);
void write_census_jsonl(const SamplerConfig& config, std::ostream& out);
std::vector<CensusRecord> read_census_jsonl(std::istream& in);

struct SummaryBin {
  int dyadic = 0;
  long samples_with_hit = 0;   // samples with an acceptable time in P_i
  long sample_value_pairs = 0; // (sample, distinct m) pairs in P_i
  long max_multiplicity = 0;   // max samples sharing one exact m
  double mean_frequency = 0;   // pairs / (samples * |P_i|)
};

// claims: rigidity-scarcity, acceptable-multiplicity
struct SummaryTable {
  long total_samples = 0;
  long degenerate_samples = 0;
  std::map<int, SummaryBin> bins;
  // Least-squares slope of log2(mean per-value frequency) against i over
  // [slope_lo, slope_hi]; the scarcity law predicts -1.
  double slope = 0;
  int slope_lo = 0, slope_hi = 0;
  bool slope_valid = false;
  // Histogram (per epsilon) of the dyadic density proxies, 10 equal bins.
  std::vector<std::array<long, 10>> density_histograms;
  // Fraction of samples with at least one expected detection, per epsilon.
  std::vector<double> expected_hit_rate;

  std::string to_csv() const;
};

// Bins detections dyadically and fits the scarcity slope over [lo, hi]
// (defaults 8..16). Throws InsufficientData when fewer than two bins in the
// range are populated.
SummaryTable summarize(const std::vector<CensusRecord>& records, int lo = 8,
                       int hi = 16, size_t eps_count = 0);

}  // namespace ietlab
