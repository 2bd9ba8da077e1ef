// Command-line driver: manifest-driven experiment runs plus small
// single-file utilities for injecting, detecting, and parsing PDFs.
//
// Exit codes: 0 success, 1 completed with per-item failures, 2 invalid
// invocation or fatal error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reviewaudit/audit/corpus.hpp"
#include "reviewaudit/audit/experiments.hpp"
#include "reviewaudit/audit/fixtures.hpp"
#include "reviewaudit/audit/manifest.hpp"
#include "reviewaudit/audit/report.hpp"
#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/io.hpp"
#include "reviewaudit/llm/backend.hpp"
#include "reviewaudit/llm/client.hpp"
#include "reviewaudit/llm/mock.hpp"
#include "reviewaudit/llm/transport.hpp"
#include "reviewaudit/pdf/detect.hpp"
#include "reviewaudit/pdf/inject.hpp"
#include "reviewaudit/pdf/paper.hpp"
#include "reviewaudit/pdf/reader.hpp"

namespace ra = reviewaudit;
using ra::audit::Manifest;

namespace {

// Shared flag storage. Only the parsed subcommand's values are read, and
// only for options that were actually given (checked via count()).
struct Flags {
  std::string corpus, output, model, base_url, api_key, cache_dir;
  std::string payload, payload_file, content_mode, authorship, author_name, llm_source;
  std::uint64_t seed = 0;
  int match_threshold = 7, trials = 100, positive_threshold = 6, jobs = 1,
      max_tokens = 1024;
  std::size_t buckets = 5;
  double flow_fraction = 0.05;
  std::vector<double> fractions;
  bool offline = false, use_mock = false, cache_enabled = true,
       offline_matcher = true, synthesize = true;
};

void add_common_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--corpus", f.corpus, "papers.jsonl corpus path");
  cmd->add_option("--output", f.output, "report JSON output path");
  cmd->add_option("--seed", f.seed, "base seed for all randomized stages");
  cmd->add_flag("--offline,!--online", f.offline,
                "serve model calls from the cache only (no network)");
  cmd->add_flag("--mock,!--no-mock", f.use_mock, "use the deterministic offline model");
  cmd->add_flag("--offline-matcher,!--remote-matcher", f.offline_matcher,
                "match key points with the local token-overlap matcher");
  cmd->add_option("--model", f.model, "model identifier for backend requests");
  cmd->add_option("--base-url", f.base_url, "API base URL (env REVIEW_AUDIT_BASE_URL)");
  cmd->add_option("--api-key", f.api_key, "API key (env REVIEW_AUDIT_API_KEY)");
  cmd->add_option("--cache-dir", f.cache_dir,
                  "response cache directory (env REVIEW_AUDIT_CACHE_DIR)");
  cmd->add_flag("--cache,!--no-cache", f.cache_enabled, "persist model responses");
  cmd->add_option("--payload", f.payload, "hidden instruction text to inject");
  cmd->add_option("--payload-file", f.payload_file, "read the payload from a file");
  cmd->add_option("--content-mode", f.content_mode,
                  "paper content given to the reviewer: full, title-abstract-intro, "
                  "title-only, empty");
  cmd->add_option("--authorship", f.authorship,
                  "claimed authorship: double-blind, original, top-university, "
                  "top-company, turing-laureate");
  cmd->add_option("--author-name", f.author_name, "author name for --authorship original");
  cmd->add_option("--match-threshold", f.match_threshold,
                  "minimum 5-10 match score that counts as the same point");
  cmd->add_option("--fractions", f.fractions, "replacement fractions for ranksim");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials per fraction");
  cmd->add_option("--flow-fraction", f.flow_fraction,
                  "fraction used for the ranking flow matrix");
  cmd->add_option("--llm-source", f.llm_source,
                  "which model rating replaces human ones: clean or manipulated");
  cmd->add_flag("--synthesize-missing,!--no-synthesize", f.synthesize,
                "derive absent model ratings from the human mean");
  cmd->add_option("--buckets", f.buckets, "length-probe bucket count");
  cmd->add_option("--positive-threshold", f.positive_threshold,
                  "minimum rating that counts as positive");
  cmd->add_option("--jobs", f.jobs, "parallel per-paper workers");
  cmd->add_option("--max-tokens", f.max_tokens, "completion token limit per request");
}

void apply_flags(const CLI::App* cmd, const Flags& f, Manifest& m) {
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (given("--corpus")) m.corpus_path = f.corpus;
  if (given("--output")) m.output_path = f.output;
  if (given("--seed")) m.seed = f.seed;
  if (given("--offline")) m.offline = f.offline;
  if (given("--mock")) m.use_mock = f.use_mock;
  if (given("--offline-matcher")) m.offline_matcher = f.offline_matcher;
  if (given("--model")) m.model = f.model;
  if (given("--base-url")) m.base_url = f.base_url;
  if (given("--api-key")) m.api_key = f.api_key;
  if (given("--cache-dir")) m.cache_dir = f.cache_dir;
  if (given("--cache")) m.cache_enabled = f.cache_enabled;
  if (given("--payload")) m.payload = f.payload;
  if (given("--payload-file")) m.payload = ra::read_file(f.payload_file);
  if (given("--content-mode"))
    m.content_mode = ra::review::content_mode_from_string(f.content_mode);
  if (given("--authorship"))
    m.authorship = ra::review::authorship_kind_from_string(f.authorship);
  if (given("--author-name")) m.author_name = f.author_name;
  if (given("--match-threshold")) m.match_threshold = f.match_threshold;
  if (given("--fractions")) m.fractions = f.fractions;
  if (given("--trials")) m.trials = f.trials;
  if (given("--flow-fraction")) m.flow_fraction = f.flow_fraction;
  if (given("--llm-source"))
    m.llm_source = ra::ranksim::llm_source_from_string(f.llm_source);
  if (given("--synthesize-missing")) m.synthesize_missing_llm = f.synthesize;
  if (given("--buckets")) m.buckets = f.buckets;
  if (given("--positive-threshold")) m.positive_threshold = f.positive_threshold;
  if (given("--jobs")) m.jobs = f.jobs;
  if (given("--max-tokens")) m.max_tokens = f.max_tokens;
}

// Re-checks the invariants parse_manifest enforces, for manifests that were
// assembled from command-line flags.
void validate_manifest(const Manifest& m) {
  using ra::InvalidManifest;
  if (m.corpus_path.empty()) throw InvalidManifest("--corpus is required");
  if (m.output_path.empty()) throw InvalidManifest("--output is required");
  if (m.match_threshold < 5 || m.match_threshold > 10)
    throw InvalidManifest("match threshold must be within [5, 10]");
  if (m.fractions.empty()) throw InvalidManifest("fractions must not be empty");
  for (const double fr : m.fractions)
    if (fr < 0.0 || fr > 1.0) throw InvalidManifest("fractions must lie within [0, 1]");
  if (m.trials < 1) throw InvalidManifest("trials must be at least 1");
  if (m.flow_fraction < 0.0 || m.flow_fraction > 1.0)
    throw InvalidManifest("flow fraction must lie within [0, 1]");
  if (m.buckets < 1) throw InvalidManifest("buckets must be at least 1");
  if (m.positive_threshold < 1 || m.positive_threshold > 10)
    throw InvalidManifest("positive threshold must be within [1, 10]");
  if (m.jobs < 1) throw InvalidManifest("jobs must be at least 1");
  if (m.max_tokens < 1) throw InvalidManifest("max tokens must be at least 1");
  if (m.authorship == ra::review::AuthorshipKind::Original && m.author_name.empty())
    throw InvalidManifest("--authorship original requires --author-name");
}

int run_manifest(const Manifest& m) {
  const std::vector<ra::rater::PaperRecord> records = ra::audit::load_corpus(m.corpus_path);

  std::shared_ptr<ra::llm::Backend> backend;
  std::string backend_name;
  if (m.use_mock) {
    backend = std::make_shared<ra::llm::MockBackend>();
    backend_name = "mock";
  } else {
    const ra::llm::EndpointConfig ep = ra::llm::endpoint_from_env(m.base_url, m.api_key);
    backend = std::make_shared<ra::llm::HttpBackend>(
        std::shared_ptr<ra::llm::HttpTransport>(ra::llm::make_httplib_transport()),
        ep.base_url, ep.api_key);
    backend_name = "http";
  }

  ra::llm::ClientOptions copts;
  copts.cache_dir = m.cache_dir;
  copts.cache_enabled = m.cache_enabled;
  // "Offline" forbids network traffic. The bundled model is local and
  // deterministic, so it stays callable; only HTTP backends fall back to
  // cache-only replay.
  copts.offline = m.offline && !m.use_mock;
  copts.max_concurrent = std::max(1, m.jobs);
  ra::llm::Client client(backend, copts);

  const ra::audit::ExperimentResult result = ra::audit::run_experiment(m, records, client);

  ra::audit::ReportContext ctx;
  ctx.model = ra::audit::effective_model(m);
  ctx.backend = backend_name;
  ctx.cache = client.stats();
  const nlohmann::ordered_json report = ra::audit::build_report(m, result, ctx);
  ra::audit::write_report_files(m.output_path, report);

  std::cout << "wrote " << m.output_path << " ("
            << result.items.size() << " items, " << result.failed_items << " failed)\n";
  return result.failed_items > 0 ? 1 : 0;
}

std::string read_pdf_arg(const std::string& path) { return ra::read_file(path); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hidden-instruction audit toolkit for paper PDFs and model reviews"};
  app.set_version_flag("--version", std::string(ra::audit::kToolName) + " " +
                                        ra::audit::kToolVersion);
  app.require_subcommand(1);

  Flags flags;

  // run <manifest.json>
  std::string manifest_path;
  CLI::App* cmd_run = app.add_subcommand("run", "run the experiment named by a manifest");
  cmd_run->add_option("manifest", manifest_path, "manifest JSON file")->required();
  add_common_options(cmd_run, flags);

  // One-shot subcommands, one per experiment.
  struct ExpCmd {
    const char* name;
    const char* alias;
    ra::audit::Experiment experiment;
    CLI::App* cmd = nullptr;
  };
  ExpCmd experiments[] = {
      {"inject-detect", "inject", ra::audit::Experiment::InjectDetect},
      {"review-generate", "review", ra::audit::Experiment::ReviewGenerate},
      {"consistency-audit", "consistency", ra::audit::Experiment::ConsistencyAudit},
      {"implicit-audit", "implicit", ra::audit::Experiment::ImplicitAudit},
      {"ablation-probe", "ablate", ra::audit::Experiment::AblationProbe},
      {"authorship-probe", "authorship", ra::audit::Experiment::AuthorshipProbe},
      {"length-probe", "length", ra::audit::Experiment::LengthProbe},
      {"ranksim", nullptr, ra::audit::Experiment::RankSim},
      {"regression-diag", "regress", ra::audit::Experiment::RegressionDiag},
  };
  for (ExpCmd& e : experiments) {
    e.cmd = app.add_subcommand(e.name, std::string("run the ") + e.name + " experiment");
    if (e.alias) e.cmd->alias(e.alias);
    add_common_options(e.cmd, flags);
  }

  // fixtures --dir DIR
  std::string fixtures_dir;
  ra::audit::FixtureOptions fixture_opts;
  bool fixtures_no_manifests = false;
  CLI::App* cmd_fixtures =
      app.add_subcommand("fixtures", "generate a synthetic demo corpus with manifests");
  cmd_fixtures->add_option("--dir", fixtures_dir, "output directory")->required();
  cmd_fixtures->add_option("--papers", fixture_opts.papers, "number of papers");
  cmd_fixtures->add_option("--seed", fixture_opts.seed, "generator seed");
  cmd_fixtures->add_flag("--no-manifests", fixtures_no_manifests,
                         "skip writing the example manifests");

  // inject-pdf / detect-pdf / parse-pdf utilities.
  std::string in_path, out_path;
  double font_size = 1.0;
  CLI::App* cmd_inject_pdf =
      app.add_subcommand("inject-pdf", "embed hidden instruction text in one PDF");
  cmd_inject_pdf->add_option("--in", in_path, "input PDF")->required();
  cmd_inject_pdf->add_option("--out", out_path, "output PDF")->required();
  cmd_inject_pdf->add_option("--payload", flags.payload, "instruction text to hide");
  cmd_inject_pdf->add_option("--payload-file", flags.payload_file,
                             "read the payload from a file");
  cmd_inject_pdf->add_option("--font-size", font_size, "payload font size in points");

  CLI::App* cmd_detect_pdf =
      app.add_subcommand("detect-pdf", "scan one PDF for hidden text");
  cmd_detect_pdf->add_option("--in", in_path, "input PDF")->required();

  bool visible_only = false;
  CLI::App* cmd_parse_pdf =
      app.add_subcommand("parse-pdf", "extract title, sections, and body text");
  cmd_parse_pdf->add_option("--in", in_path, "input PDF")->required();
  cmd_parse_pdf->add_flag("--visible-only", visible_only,
                          "drop text a human reader would not see");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_run->parsed()) {
      Manifest m = ra::audit::load_manifest(manifest_path);
      apply_flags(cmd_run, flags, m);
      validate_manifest(m);
      return run_manifest(m);
    }
    for (const ExpCmd& e : experiments) {
      if (!e.cmd->parsed()) continue;
      Manifest m;
      m.experiment = e.experiment;
      apply_flags(e.cmd, flags, m);
      validate_manifest(m);
      return run_manifest(m);
    }
    if (cmd_fixtures->parsed()) {
      fixture_opts.write_manifests = !fixtures_no_manifests;
      const ra::audit::FixtureCorpus fc =
          ra::audit::generate_fixture_corpus(fixtures_dir, fixture_opts);
      nlohmann::ordered_json j;
      j["corpus_path"] = fc.corpus_path.string();
      j["papers"] = fc.pdf_paths.size();
      j["manifests"] = nlohmann::ordered_json::array();
      for (const auto& p : fc.manifest_paths) j["manifests"].push_back(p.string());
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (cmd_inject_pdf->parsed()) {
      std::string payload = ra::audit::default_attack_payload();
      if (cmd_inject_pdf->count("--payload")) payload = flags.payload;
      if (cmd_inject_pdf->count("--payload-file"))
        payload = ra::read_file(flags.payload_file);
      ra::pdf::InjectOptions opts;
      opts.font_size_pt = font_size;
      const ra::pdf::InjectResult r = ra::pdf::inject_payload(read_pdf_arg(in_path),
                                                              payload, opts);
      ra::write_file(out_path, r.pdf_bytes);
      nlohmann::ordered_json j;
      j["output"] = out_path;
      j["page_index"] = r.page_index;
      j["appended_page"] = r.appended_page;
      j["line_count"] = r.line_count;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (cmd_detect_pdf->parsed()) {
      const ra::pdf::DetectionReport report =
          ra::pdf::detect_hidden_text(read_pdf_arg(in_path));
      std::cout << ra::pdf::detection_report_json(report).dump(2) << "\n";
      return 0;
    }
    if (cmd_parse_pdf->parsed()) {
      ra::pdf::ParseOptions opts;
      opts.include_hidden = !visible_only;
      const ra::pdf::ParsedPaper paper =
          ra::pdf::parse_paper(ra::pdf::read_document(read_pdf_arg(in_path)), opts);
      nlohmann::ordered_json j;
      j["title"] = paper.title;
      j["abstract"] = paper.abstract_text;
      j["sections"] = nlohmann::ordered_json::array();
      for (const auto& s : paper.sections)
        j["sections"].push_back({{"heading", s.heading}, {"body", s.body}});
      j["main_text"] = paper.main_text;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const ra::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
