#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "reviewaudit/ranksim/displace.hpp"
#include "reviewaudit/review/review.hpp"

namespace reviewaudit::audit {

enum class Experiment {
  InjectDetect,
  ReviewGenerate,
  ConsistencyAudit,
  ImplicitAudit,
  AblationProbe,
  AuthorshipProbe,
  LengthProbe,
  RankSim,
  RegressionDiag,
};

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);  // throws InvalidManifest

// Declarative description of one audit run. One-shot subcommands build the
// same structure from flags, so both entry points share validation.
struct Manifest {
  Experiment experiment = Experiment::InjectDetect;
  std::string corpus_path;  // papers.jsonl
  std::string output_path;  // report JSON; a .md summary lands beside it

  std::uint64_t seed = 0;
  bool offline = false;
  bool use_mock = false;  // deterministic offline model instead of HTTP
  bool offline_matcher = true;  // token-overlap matcher instead of model calls
  std::string model;      // default: backend-appropriate id
  std::string base_url;   // empty: REVIEW_AUDIT_BASE_URL or built-in default
  std::string api_key;    // empty: REVIEW_AUDIT_API_KEY
  std::string cache_dir;  // empty: REVIEW_AUDIT_CACHE_DIR or built-in default
  bool cache_enabled = true;

  std::string payload;  // injected text; empty: built-in demonstration payload
  review::ContentMode content_mode = review::ContentMode::Full;
  review::AuthorshipKind authorship = review::AuthorshipKind::DoubleBlind;
  std::string author_name;  // free text for the original-authors condition
  int match_threshold = 7;

  std::vector<double> fractions{0.0, 0.05, 0.1, 0.2};
  int trials = 100;
  double flow_fraction = 0.05;  // fraction whose band flow the report details
  ranksim::LlmSource llm_source = ranksim::LlmSource::Manipulated;
  bool synthesize_missing_llm = true;  // derive absent model ratings from human means

  std::size_t buckets = 5;
  int positive_threshold = 6;

  int jobs = 1;
  int max_tokens = 1024;

  nlohmann::ordered_json raw;  // manifest echo for the report
};

// Parses and validates manifest JSON. Unknown experiment names, unknown
// keys, and type errors all raise InvalidManifest before any work starts.
Manifest parse_manifest(const std::string& json_text);
Manifest load_manifest(const std::string& path);

// The manifest rendered back to JSON with every effective value filled in;
// this is what reports echo, so defaults are visible.
nlohmann::ordered_json manifest_json(const Manifest& m);

}  // namespace reviewaudit::audit
