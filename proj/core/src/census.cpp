#include "ietlab/census.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "ietlab/errors.hpp"
#include "ietlab/sampling.hpp"

namespace ietlab {

namespace {

using ordered_json = nlohmann::ordered_json;

struct CensusContext {
  RauzyClass cls;
  AcceptableWordTable table;
  Rational predicate_density;
  int i_max;
  bool class_mode;
};

CensusContext make_context(const SamplerConfig& config) {
  if (!config.perm && !config.class_seed)
    throw Error("census config needs a permutation or a class seed");
  const Permutation& seed_perm =
      config.class_seed ? *config.class_seed : *config.perm;
  CensusContext ctx{RauzyClass::of(seed_perm), AcceptableWordTable{},
                    Rational(0), 0, config.class_seed.has_value()};
  ctx.table = AcceptableWordTable::build(ctx.cls);
  ctx.predicate_density =
      config.predicate.empirical_density(config.predicate_horizon);
  if (config.i_max > 0) {
    ctx.i_max = config.i_max;
  } else if (config.max_norm) {
    Int top = *config.max_norm - 1;
    ctx.i_max = std::max<int>(
        1, static_cast<int>(mpz_sizeinbase(top.get_mpz_t(), 2)) - 1);
  } else {
    ctx.i_max = 30;
  }
  return ctx;
}

Iet draw_iet(const SamplerConfig& config, const CensusContext& ctx,
             long index) {
  Rng rng(config.seed, static_cast<std::uint64_t>(index));
  const Permutation* perm = nullptr;
  if (ctx.class_mode)
    perm = &ctx.cls.perms()[rng.below(
        static_cast<std::uint64_t>(ctx.cls.size()))];
  else
    perm = &*config.perm;
  const int d = perm->size();
  return Iet::make(sample_simplex(rng, d, config.denom_bits), *perm);
}

CensusRecord process_sample(const SamplerConfig& config,
                            const CensusContext& ctx, long index) {
  CensusRecord rec;
  rec.id = index;
  rec.seed = config.seed;
  rec.predicate_density = ctx.predicate_density;
  try {
    rec.iet = draw_iet(config, ctx, index);
    rec.perm = rec.iet.perm();

    StopRule stop;
    stop.max_norm = config.max_norm;
    stop.max_steps = config.max_steps;
    RvState st = expand(rec.iet, stop, &ctx.table);
    rec.word = st.word;
    rec.tie_step = st.degenerate ? st.tie_step : -1;

    // Acceptable detections, then the expected subset per epsilon.
    for (const ExpansionEvent& ev : st.events) {
      if (!ev.acceptable) continue;
      CensusDetection det;
      det.step = ev.step;
      det.time = ev.cmax;
      det.dyadic = ev.dyadic;
      det.source = DetectionSource::acceptable;
      det.in_predicate = ev.cmax.fits_slong_p()
                             ? config.predicate.contains(ev.cmax.get_si())
                             : true;
      rec.detections.push_back(std::move(det));
    }
    rec.dyadic_hits.resize(config.epsilons.size());
    rec.density_proxies.resize(config.epsilons.size());
    for (size_t e = 0; e < config.epsilons.size(); ++e) {
      auto hits = detect_expected(st, ctx.table, config.epsilons[e]);
      std::set<int> windows;
      for (const auto& [step, m] : hits) {
        CensusDetection det;
        det.step = step;
        det.time = m;
        det.dyadic = static_cast<int>(mpz_sizeinbase(m.get_mpz_t(), 2)) - 1;
        det.source = DetectionSource::expected;
        det.eps_index = static_cast<int>(e);
        det.in_predicate =
            m.fits_slong_p() ? config.predicate.contains(m.get_si()) : true;
        if (det.dyadic <= ctx.i_max) windows.insert(det.dyadic);
        rec.detections.push_back(std::move(det));
      }
      rec.dyadic_hits[e].assign(windows.begin(), windows.end());
      rec.density_proxies[e] =
          Rational(static_cast<long>(windows.size()), ctx.i_max);
      rec.density_proxies[e].canonicalize();
    }

    // Exact defect recomputation for the configured scope; values are
    // shared across detections with the same time.
    if (config.defect_mode != SamplerConfig::DefectMode::none) {
      std::unordered_map<unsigned long, Rational> cache;
      for (CensusDetection& det : rec.detections) {
        if (config.defect_mode == SamplerConfig::DefectMode::expected &&
            det.source != DetectionSource::expected)
          continue;
        if (!det.time.fits_ulong_p()) continue;
        unsigned long m = det.time.get_ui();
        auto it = cache.find(m);
        if (it == cache.end())
          it = cache.emplace(m, rigidity_defect(rec.iet, m)).first;
        det.defect = it->second;
        det.defect_known = true;
      }
    }

    if (config.emit_events) rec.events = std::move(st.events);
  } catch (const Error& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

Iet sample_iet(const SamplerConfig& config, long index) {
  CensusContext ctx = make_context(config);
  return draw_iet(config, ctx, index);
}

void run_census(const SamplerConfig& config,
                const std::function<void(CensusRecord&&)>& sink) {
  if (config.samples < 0) throw Error("negative sample count");
  if (config.samples == 0) return;
  CensusContext ctx = make_context(config);

  unsigned n_threads = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  const long block = std::max<long>(1, 64 * n_threads);
  for (long b0 = 0; b0 < config.samples; b0 += block) {
    const long b1 = std::min(config.samples, b0 + block);
    std::vector<CensusRecord> slot(b1 - b0);
    if (n_threads <= 1) {
      for (long i = b0; i < b1; ++i)
        slot[i - b0] = process_sample(config, ctx, i);
    } else {
      std::vector<std::thread> pool;
      std::atomic<long> next(b0);
      for (unsigned t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
          for (;;) {
            long i = next.fetch_add(1);
            if (i >= b1) return;
            slot[i - b0] = process_sample(config, ctx, i);
          }
        });
      for (auto& th : pool) th.join();
    }
    for (auto& rec : slot) sink(std::move(rec));
  }
}

std::vector<CensusRecord> run_census_collect(const SamplerConfig& config) {
  std::vector<CensusRecord> out;
  out.reserve(config.samples);
  run_census(config, [&](CensusRecord&& r) { out.push_back(std::move(r)); });
  return out;
}

namespace {

std::string lengths_to_string(const Iet& t) {
  std::string out;
  for (int i = 0; i < t.order(); ++i) {
    if (i) out += ',';
    out += format_rational(t.lengths()[i]);
  }
  return out;
}

const char* source_name(DetectionSource s) {
  switch (s) {
    case DetectionSource::plain: return "plain";
    case DetectionSource::acceptable: return "acceptable";
    default: return "expected";
  }
}

}  // namespace

std::string record_to_jsonl(const CensusRecord& rec,
                            const SamplerConfig& config) {
  ordered_json j;
  j["id"] = rec.id;
  j["seed"] = rec.seed;
  j["perm"] = rec.perm.format();
  j["lengths"] = lengths_to_string(rec.iet);
  j["word"] = rec.word;
  j["events"] = ordered_json::array();
  for (const ExpansionEvent& ev : rec.events) {
    ordered_json je;
    je["n"] = ev.step;
    je["cmax"] = ev.cmax.get_str();
    je["i"] = ev.dyadic;
    je["balance"] = format_rational(ev.balance);
    je["acceptable"] = ev.acceptable;
    if (ev.acceptable) {
      je["conc"] = format_rational(ev.concentration);
      ordered_json ex = ordered_json::array();
      for (const Rational& eps : config.epsilons)
        ex.push_back(ev.concentration > 1 - eps / 2);
      je["expected"] = std::move(ex);
    } else {
      je["conc"] = nullptr;
    }
    j["events"].push_back(std::move(je));
  }
  j["detections"] = ordered_json::array();
  j["defects"] = ordered_json::array();
  for (const CensusDetection& det : rec.detections) {
    ordered_json jd;
    jd["n"] = det.step;
    jd["m"] = det.time.get_str();
    jd["i"] = det.dyadic;
    jd["source"] = source_name(det.source);
    jd["eps"] = det.eps_index >= 0
                    ? ordered_json(format_rational(config.epsilons[det.eps_index]))
                    : ordered_json(nullptr);
    jd["in_A"] = det.in_predicate;
    j["detections"].push_back(std::move(jd));
    j["defects"].push_back(det.defect_known
                               ? ordered_json(format_rational(det.defect))
                               : ordered_json(nullptr));
  }
  if (rec.tie_step >= 0)
    j["tie_step"] = rec.tie_step;
  else
    j["tie_step"] = nullptr;
  ordered_json dens;
  ordered_json proxies = ordered_json::array();
  ordered_json windows = ordered_json::array();
  for (size_t e = 0; e < rec.density_proxies.size(); ++e) {
    proxies.push_back(format_rational(rec.density_proxies[e]));
    windows.push_back(rec.dyadic_hits[e]);
  }
  dens["proxies"] = std::move(proxies);
  dens["windows"] = std::move(windows);
  dens["A"] = format_rational(rec.predicate_density);
  j["density"] = std::move(dens);
  if (!rec.error.empty()) j["error"] = rec.error;
  return j.dump();
}

void write_census_jsonl(const SamplerConfig& config, std::ostream& out) {
  run_census(config, [&](CensusRecord&& rec) {
    out << record_to_jsonl(rec, config) << '\n';
  });
}

std::vector<CensusRecord> read_census_jsonl(std::istream& in) {
  std::vector<CensusRecord> records;
  std::vector<std::string> eps_seen;  // first-seen order matches the config
  auto eps_index_of = [&](const std::string& s) {
    for (size_t i = 0; i < eps_seen.size(); ++i)
      if (eps_seen[i] == s) return static_cast<int>(i);
    eps_seen.push_back(s);
    return static_cast<int>(eps_seen.size()) - 1;
  };
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line);
    CensusRecord rec;
    rec.id = j.at("id").get<long>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.perm = Permutation::parse(j.at("perm").get<std::string>());
    rec.iet = Iet::make(parse_rational_list(j.at("lengths").get<std::string>()),
                        rec.perm);
    rec.word = j.at("word").get<std::string>();
    rec.tie_step = j.at("tie_step").is_null() ? -1 : j.at("tie_step").get<long>();
    const auto& dets = j.at("detections");
    const auto& defs = j.at("defects");
    for (size_t k = 0; k < dets.size(); ++k) {
      CensusDetection det;
      det.step = dets[k].at("n").get<long>();
      det.time = Int(dets[k].at("m").get<std::string>());
      det.dyadic = dets[k].at("i").get<int>();
      std::string src = dets[k].at("source").get<std::string>();
      det.source = src == "expected"    ? DetectionSource::expected
                   : src == "plain"     ? DetectionSource::plain
                                        : DetectionSource::acceptable;
      det.eps_index = dets[k].at("eps").is_null()
                          ? -1
                          : eps_index_of(dets[k].at("eps").get<std::string>());
      det.in_predicate = dets[k].at("in_A").get<bool>();
      if (!defs[k].is_null()) {
        det.defect = parse_rational(defs[k].get<std::string>());
        det.defect_known = true;
      }
      rec.detections.push_back(std::move(det));
    }
    const auto& dens = j.at("density");
    for (const auto& p : dens.at("proxies"))
      rec.density_proxies.push_back(parse_rational(p.get<std::string>()));
    for (const auto& w : dens.at("windows"))
      rec.dyadic_hits.push_back(w.get<std::vector<int>>());
    rec.predicate_density = parse_rational(dens.at("A").get<std::string>());
    if (j.contains("error")) rec.error = j.at("error").get<std::string>();
    records.push_back(std::move(rec));
  }
  return records;
}

SummaryTable summarize(const std::vector<CensusRecord>& records, int lo,
                       int hi, size_t eps_count) {
  if (records.empty()) throw InsufficientData("no records");
  SummaryTable table;
  table.total_samples = static_cast<long>(records.size());
  table.slope_lo = lo;
  table.slope_hi = hi;

  if (eps_count == 0)
    for (const CensusRecord& rec : records)
      eps_count = std::max(eps_count, rec.density_proxies.size());

  // Exact-value collision counts: value -> number of distinct samples.
  std::unordered_map<unsigned long, long> value_samples;
  std::unordered_map<unsigned long, int> value_bin;
  std::vector<long> expected_hits(eps_count, 0);
  table.density_histograms.assign(eps_count, {});

  long spot = 0;
  for (const CensusRecord& rec : records) {
    if (rec.tie_step >= 0) ++table.degenerate_samples;
    std::set<std::pair<int, unsigned long>> seen;  // (bin, value) per sample
    std::vector<bool> has_expected(eps_count, false);
    for (const CensusDetection& det : rec.detections) {
      if (det.source == DetectionSource::expected) {
        if (det.eps_index >= 0 &&
            static_cast<size_t>(det.eps_index) < eps_count)
          has_expected[det.eps_index] = true;
        continue;
      }
      if (det.source != DetectionSource::acceptable) continue;
      if (!det.time.fits_ulong_p()) continue;
      seen.emplace(det.dyadic, det.time.get_ui());
    }
    std::set<int> bins_hit;
    for (const auto& [bin, value] : seen) {
      ++value_samples[value];
      value_bin[value] = bin;
      ++table.bins[bin].sample_value_pairs;
      bins_hit.insert(bin);
    }
    for (int bin : bins_hit) ++table.bins[bin].samples_with_hit;
    for (size_t e = 0; e < eps_count && e < rec.density_proxies.size(); ++e) {
      double p = to_double(rec.density_proxies[e]);
      int idx = std::min(9, static_cast<int>(p * 10));
      ++table.density_histograms[e][idx];
      if (has_expected[e]) ++expected_hits[e];
    }
    // Spot check: recomputed defects must agree exactly with the records.
    if (spot++ % 100 == 0) {
      for (const CensusDetection& det : rec.detections)
        if (det.defect_known && det.time.fits_ulong_p()) {
          if (rigidity_defect(rec.iet, det.time.get_ui()) != det.defect)
            throw Error("defect recomputation mismatch in record " +
                        std::to_string(rec.id));
          break;
        }
    }
  }

  for (auto& [value, count] : value_samples) {
    SummaryBin& bin = table.bins[value_bin[value]];
    bin.max_multiplicity = std::max(bin.max_multiplicity, count);
  }
  for (auto& [i, bin] : table.bins) {
    bin.dyadic = i;
    bin.mean_frequency = static_cast<double>(bin.sample_value_pairs) /
                         (static_cast<double>(table.total_samples) *
                          std::ldexp(1.0, i));
  }
  table.expected_hit_rate.assign(eps_count, 0.0);
  for (size_t e = 0; e < eps_count; ++e)
    table.expected_hit_rate[e] = static_cast<double>(expected_hits[e]) /
                                 static_cast<double>(table.total_samples);

  // log-log least squares over the requested dyadic range.
  std::vector<std::pair<double, double>> pts;
  for (int i = lo; i <= hi; ++i) {
    auto it = table.bins.find(i);
    if (it == table.bins.end() || it->second.sample_value_pairs == 0) continue;
    pts.emplace_back(static_cast<double>(i),
                     std::log2(it->second.mean_frequency));
  }
  if (pts.size() < 2)
    throw InsufficientData("fewer than two populated bins for the slope");
  double mx = 0, my = 0;
  for (auto& [x, y] : pts) mx += x, my += y;
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0, sxx = 0;
  for (auto& [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
  table.slope = sxy / sxx;
  table.slope_valid = true;
  return table;
}

std::string SummaryTable::to_csv() const {
  std::ostringstream out;
  out << "dyadic,samples_with_hit,sample_value_pairs,max_multiplicity,"
         "mean_frequency\n";
  for (const auto& [i, bin] : bins)
    out << i << ',' << bin.samples_with_hit << ',' << bin.sample_value_pairs
        << ',' << bin.max_multiplicity << ',' << bin.mean_frequency << '\n';
  out << "total_samples," << total_samples << "\n";
  out << "degenerate_samples," << degenerate_samples << "\n";
  if (slope_valid)
    out << "slope[" << slope_lo << ".." << slope_hi << "]," << slope << "\n";
  for (size_t e = 0; e < expected_hit_rate.size(); ++e)
    out << "expected_hit_rate_" << e << ',' << expected_hit_rate[e] << "\n";
  for (size_t e = 0; e < density_histograms.size(); ++e) {
    out << "density_histogram_" << e;
    for (long c : density_histograms[e]) out << ',' << c;
    out << "\n";
  }
  return out.str();
}

}  // namespace ietlab
