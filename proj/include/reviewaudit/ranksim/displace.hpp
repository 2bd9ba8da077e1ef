#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "reviewaudit/rater/record.hpp"
#include "reviewaudit/ranksim/ranking.hpp"

namespace reviewaudit::ranksim {

// Which per-paper model rating replaces sampled human review slots.
enum class LlmSource { Clean, Manipulated };

const char* to_string(LlmSource source);
LlmSource llm_source_from_string(const std::string& name);  // throws InvalidManifest

// Replaces round(fraction * total_review_slots) uniformly sampled review
// ratings with the paper's model rating. Fractions address individual
// reviews, not papers, so large committees are proportionally more exposed.
// Deterministic in seed. Throws OutOfRange (fraction outside [0, 1]) and
// MissingLlmRating (a sampled paper lacks the requested model rating).
std::vector<rater::PaperRecord> replace_reviews(const std::vector<rater::PaperRecord>& records,
                                                double fraction, LlmSource source,
                                                std::uint64_t seed);

struct DisplacementTrial {
  double displaced_pct = 0.0;  // top-30% displacement after replacement
  FlowMatrix flow{};           // band-to-band movement
};

// One seeded replacement experiment: perturb, re-rank, and report both the
// top-30% displacement and the full band flow.
DisplacementTrial run_trial(const std::vector<rater::PaperRecord>& records, double fraction,
                            std::uint64_t trial_seed, LlmSource source);

struct CurvePoint {
  double fraction = 0.0;
  double mean = 0.0;    // mean displaced_pct over trials
  double stddev = 0.0;  // sample standard deviation (0 for a single trial)
};

struct CurveOptions {
  std::vector<double> fractions{0.0, 0.05, 0.1, 0.2};
  int trials = 100;
  std::uint64_t seed = 0;  // trial t runs with seed + t
  LlmSource source = LlmSource::Manipulated;
};

// Parallel over trials when OpenMP is available; byte-identical to the
// serial reference either way.
std::vector<CurvePoint> displacement_curve(const std::vector<rater::PaperRecord>& records,
                                           const CurveOptions& opts);
std::vector<CurvePoint> displacement_curve_serial(
    const std::vector<rater::PaperRecord>& records, const CurveOptions& opts);

std::string curve_csv(const std::vector<CurvePoint>& curve);  // fraction,mean,std

struct FlowResult {
  double fraction = 0.0;
  int trials = 0;
  FlowMatrix totals{};  // summed over trials
};

FlowResult flow_matrix(const std::vector<rater::PaperRecord>& records, double fraction,
                       int trials, std::uint64_t seed, LlmSource source);
nlohmann::ordered_json flow_json(const FlowResult& flow);

}  // namespace reviewaudit::ranksim
