#include "reviewaudit/ranksim/displace.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/rng.hpp"

namespace reviewaudit::ranksim {

const char* to_string(LlmSource source) {
  return source == LlmSource::Clean ? "clean" : "manipulated";
}

LlmSource llm_source_from_string(const std::string& name) {
  if (name == "clean") return LlmSource::Clean;
  if (name == "manipulated") return LlmSource::Manipulated;
  throw InvalidManifest("unknown model-rating source '" + name + "'");
}

std::vector<rater::PaperRecord> replace_reviews(const std::vector<rater::PaperRecord>& records,
                                                double fraction, LlmSource source,
                                                std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw OutOfRange("replacement fraction must be within [0, 1]");

  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t j = 0; j < records[i].human_ratings.size(); ++j)
      slots.emplace_back(i, j);

  const auto k = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(slots.size())));

  std::vector<rater::PaperRecord> modified = records;
  if (k > 0) {
    SplitMix64 rng(seed);
    for (const std::size_t pick : rng.sample_without_replacement(k, slots.size())) {
      const auto& [paper_idx, slot_idx] = slots[pick];
      rater::PaperRecord& rec = modified[paper_idx];
      const std::optional<int>& replacement =
          source == LlmSource::Clean ? rec.clean_llm_rating : rec.manipulated_llm_rating;
      if (!replacement)
        throw MissingLlmRating("paper '" + rec.paper_id + "' has no " +
                               std::string(to_string(source)) + " model rating");
      rec.human_ratings[slot_idx] = *replacement;
    }
  }
  return modified;
}

DisplacementTrial run_trial(const std::vector<rater::PaperRecord>& records, double fraction,
                            std::uint64_t trial_seed, LlmSource source) {
  const std::vector<RankedPaper> before = rank_papers(records);
  const std::vector<RankedPaper> after =
      rank_papers(replace_reviews(records, fraction, source, trial_seed));
  DisplacementTrial trial;
  trial.displaced_pct = top_k_displacement(before, after, 30.0);
  trial.flow = section_flow(before, after);
  return trial;
}

namespace {

CurvePoint summarize_trials(double fraction, const std::vector<double>& displaced) {
  CurvePoint pt;
  pt.fraction = fraction;
  double sum = 0.0;
  for (const double d : displaced) sum += d;
  pt.mean = sum / static_cast<double>(displaced.size());
  if (displaced.size() > 1) {
    double ss = 0.0;
    for (const double d : displaced) ss += (d - pt.mean) * (d - pt.mean);
    pt.stddev = std::sqrt(ss / static_cast<double>(displaced.size() - 1));
  }
  return pt;
}

std::vector<CurvePoint> curve_impl(const std::vector<rater::PaperRecord>& records,
                                   const CurveOptions& opts, bool parallel) {
  if (opts.trials < 1) throw InsufficientData("displacement needs at least one trial");
  std::vector<CurvePoint> out;
  out.reserve(opts.fractions.size());
  for (const double fraction : opts.fractions) {
    std::vector<double> displaced(static_cast<std::size_t>(opts.trials));
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(static)
      for (int t = 0; t < opts.trials; ++t)
        displaced[static_cast<std::size_t>(t)] =
            run_trial(records, fraction, opts.seed + static_cast<std::uint64_t>(t),
                      opts.source)
                .displaced_pct;
    } else
#else
    (void)parallel;
#endif
    {
      for (int t = 0; t < opts.trials; ++t)
        displaced[static_cast<std::size_t>(t)] =
            run_trial(records, fraction, opts.seed + static_cast<std::uint64_t>(t),
                      opts.source)
                .displaced_pct;
    }
    out.push_back(summarize_trials(fraction, displaced));
  }
  return out;
}

}  // namespace

std::vector<CurvePoint> displacement_curve(const std::vector<rater::PaperRecord>& records,
                                           const CurveOptions& opts) {
  return curve_impl(records, opts, true);
}

std::vector<CurvePoint> displacement_curve_serial(
    const std::vector<rater::PaperRecord>& records, const CurveOptions& opts) {
  return curve_impl(records, opts, false);
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "fraction,mean,std\n";
  char buf[96];
  for (const CurvePoint& pt : curve) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", pt.fraction, pt.mean, pt.stddev);
    out += buf;
  }
  return out;
}

FlowResult flow_matrix(const std::vector<rater::PaperRecord>& records, double fraction,
                       int trials, std::uint64_t seed, LlmSource source) {
  if (trials < 1) throw InsufficientData("flow accumulation needs at least one trial");
  FlowResult flow;
  flow.fraction = fraction;
  flow.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const DisplacementTrial trial =
        run_trial(records, fraction, seed + static_cast<std::uint64_t>(t), source);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) flow.totals[i][j] += trial.flow[i][j];
  }
  return flow;
}

nlohmann::ordered_json flow_json(const FlowResult& flow) {
  nlohmann::ordered_json j;
  j["fraction"] = flow.fraction;
  j["trials"] = flow.trials;
  j["labels"] = section_labels();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : flow.totals) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const long long v : row) r.push_back(v);
    rows.push_back(std::move(r));
  }
  j["matrix"] = std::move(rows);
  return j;
}

}  // namespace reviewaudit::ranksim
