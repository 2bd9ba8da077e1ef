#include "reviewaudit/audit/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "reviewaudit/core/error.hpp"

namespace reviewaudit::audit {

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::InjectDetect: return "inject-detect";
    case Experiment::ReviewGenerate: return "review-generate";
    case Experiment::ConsistencyAudit: return "consistency-audit";
    case Experiment::ImplicitAudit: return "implicit-audit";
    case Experiment::AblationProbe: return "ablation-probe";
    case Experiment::AuthorshipProbe: return "authorship-probe";
    case Experiment::LengthProbe: return "length-probe";
    case Experiment::RankSim: return "ranksim";
    case Experiment::RegressionDiag: return "regression-diag";
  }
  return "inject-detect";
}

Experiment experiment_from_string(const std::string& name) {
  if (name == "inject-detect" || name == "inject") return Experiment::InjectDetect;
  if (name == "review-generate" || name == "review") return Experiment::ReviewGenerate;
  if (name == "consistency-audit" || name == "consistency")
    return Experiment::ConsistencyAudit;
  if (name == "implicit-audit" || name == "implicit") return Experiment::ImplicitAudit;
  if (name == "ablation-probe" || name == "ablate") return Experiment::AblationProbe;
  if (name == "authorship-probe" || name == "authorship")
    return Experiment::AuthorshipProbe;
  if (name == "length-probe" || name == "length") return Experiment::LengthProbe;
  if (name == "ranksim") return Experiment::RankSim;
  if (name == "regression-diag" || name == "regress") return Experiment::RegressionDiag;
  throw InvalidManifest("unknown experiment '" + name + "'");
}

namespace {

using nlohmann::ordered_json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "experiment",   "corpus_path",     "output_path",
      "seed",         "offline",         "use_mock",
      "offline_matcher", "model",        "base_url",
      "api_key",      "cache_dir",       "cache_enabled",
      "payload",      "content_mode",    "authorship",
      "author_name",  "match_threshold", "fractions",
      "trials",       "flow_fraction",   "llm_source",
      "synthesize_missing_llm",          "buckets",
      "positive_threshold",              "jobs",
      "max_tokens",
  };
  return keys;
}

template <typename T>
T field_as(const ordered_json& j, const std::string& key, const char* type_name) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidManifest("field '" + key + "' must be " + type_name);
  }
}

}  // namespace

Manifest parse_manifest(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidManifest(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidManifest("manifest must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known_keys().count(key)) throw InvalidManifest("unknown manifest field '" + key + "'");
  }
  if (!j.contains("experiment")) throw InvalidManifest("manifest is missing 'experiment'");

  Manifest m;
  m.raw = j;
  m.experiment =
      experiment_from_string(field_as<std::string>(j, "experiment", "an experiment name"));
  if (j.contains("corpus_path"))
    m.corpus_path = field_as<std::string>(j, "corpus_path", "a path string");
  if (j.contains("output_path"))
    m.output_path = field_as<std::string>(j, "output_path", "a path string");
  if (j.contains("seed")) m.seed = field_as<std::uint64_t>(j, "seed", "a nonnegative integer");
  if (j.contains("offline")) m.offline = field_as<bool>(j, "offline", "a boolean");
  if (j.contains("use_mock")) m.use_mock = field_as<bool>(j, "use_mock", "a boolean");
  if (j.contains("offline_matcher"))
    m.offline_matcher = field_as<bool>(j, "offline_matcher", "a boolean");
  if (j.contains("model")) m.model = field_as<std::string>(j, "model", "a string");
  if (j.contains("base_url")) m.base_url = field_as<std::string>(j, "base_url", "a string");
  if (j.contains("api_key")) m.api_key = field_as<std::string>(j, "api_key", "a string");
  if (j.contains("cache_dir")) m.cache_dir = field_as<std::string>(j, "cache_dir", "a string");
  if (j.contains("cache_enabled"))
    m.cache_enabled = field_as<bool>(j, "cache_enabled", "a boolean");
  if (j.contains("payload")) m.payload = field_as<std::string>(j, "payload", "a string");
  if (j.contains("content_mode"))
    m.content_mode = review::content_mode_from_string(
        field_as<std::string>(j, "content_mode", "a content mode name"));
  if (j.contains("authorship"))
    m.authorship = review::authorship_kind_from_string(
        field_as<std::string>(j, "authorship", "an authorship kind"));
  if (j.contains("author_name"))
    m.author_name = field_as<std::string>(j, "author_name", "a string");
  if (j.contains("match_threshold")) {
    m.match_threshold = field_as<int>(j, "match_threshold", "an integer");
    if (m.match_threshold < 5 || m.match_threshold > 10)
      throw InvalidManifest("match_threshold must be within [5, 10]");
  }
  if (j.contains("fractions")) {
    m.fractions = field_as<std::vector<double>>(j, "fractions", "an array of numbers");
    if (m.fractions.empty()) throw InvalidManifest("fractions must not be empty");
    for (const double f : m.fractions)
      if (f < 0.0 || f > 1.0)
        throw InvalidManifest("fractions must lie within [0, 1]");
  }
  if (j.contains("trials")) {
    m.trials = field_as<int>(j, "trials", "an integer");
    if (m.trials < 1) throw InvalidManifest("trials must be at least 1");
  }
  if (j.contains("flow_fraction")) {
    m.flow_fraction = field_as<double>(j, "flow_fraction", "a number");
    if (m.flow_fraction < 0.0 || m.flow_fraction > 1.0)
      throw InvalidManifest("flow_fraction must lie within [0, 1]");
  }
  if (j.contains("llm_source"))
    m.llm_source = ranksim::llm_source_from_string(
        field_as<std::string>(j, "llm_source", "'clean' or 'manipulated'"));
  if (j.contains("synthesize_missing_llm"))
    m.synthesize_missing_llm = field_as<bool>(j, "synthesize_missing_llm", "a boolean");
  if (j.contains("buckets")) {
    m.buckets = field_as<std::size_t>(j, "buckets", "a positive integer");
    if (m.buckets < 1) throw InvalidManifest("buckets must be at least 1");
  }
  if (j.contains("positive_threshold")) {
    m.positive_threshold = field_as<int>(j, "positive_threshold", "an integer");
    if (m.positive_threshold < 1 || m.positive_threshold > 10)
      throw InvalidManifest("positive_threshold must be within [1, 10]");
  }
  if (j.contains("jobs")) {
    m.jobs = field_as<int>(j, "jobs", "an integer");
    if (m.jobs < 1) throw InvalidManifest("jobs must be at least 1");
  }
  if (j.contains("max_tokens")) {
    m.max_tokens = field_as<int>(j, "max_tokens", "an integer");
    if (m.max_tokens < 1) throw InvalidManifest("max_tokens must be at least 1");
  }

  if (m.corpus_path.empty()) throw InvalidManifest("manifest is missing 'corpus_path'");
  if (m.output_path.empty()) throw InvalidManifest("manifest is missing 'output_path'");
  if (m.authorship == review::AuthorshipKind::Original && m.author_name.empty())
    throw InvalidManifest("authorship 'original' requires 'author_name'");
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidManifest("cannot open manifest file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

nlohmann::ordered_json manifest_json(const Manifest& m) {
  ordered_json j;
  j["experiment"] = to_string(m.experiment);
  j["corpus_path"] = m.corpus_path;
  j["output_path"] = m.output_path;
  j["seed"] = m.seed;
  j["offline"] = m.offline;
  j["use_mock"] = m.use_mock;
  j["offline_matcher"] = m.offline_matcher;
  j["model"] = m.model;
  j["base_url"] = m.base_url;
  j["cache_dir"] = m.cache_dir;
  j["cache_enabled"] = m.cache_enabled;
  j["payload"] = m.payload;
  j["content_mode"] = review::to_string(m.content_mode);
  j["authorship"] = review::to_string(m.authorship);
  j["author_name"] = m.author_name;
  j["match_threshold"] = m.match_threshold;
  j["fractions"] = m.fractions;
  j["trials"] = m.trials;
  j["flow_fraction"] = m.flow_fraction;
  j["llm_source"] = ranksim::to_string(m.llm_source);
  j["synthesize_missing_llm"] = m.synthesize_missing_llm;
  j["buckets"] = m.buckets;
  j["positive_threshold"] = m.positive_threshold;
  j["jobs"] = m.jobs;
  j["max_tokens"] = m.max_tokens;
  return j;
}

}  // namespace reviewaudit::audit
