#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "reviewaudit/audit/corpus.hpp"
#include "reviewaudit/audit/experiments.hpp"
#include "reviewaudit/audit/fixtures.hpp"
#include "reviewaudit/audit/manifest.hpp"
#include "reviewaudit/audit/report.hpp"
#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/io.hpp"
#include "reviewaudit/llm/client.hpp"
#include "reviewaudit/llm/mock.hpp"
#include "support/test_support.hpp"

namespace audit = reviewaudit::audit;
namespace rater = reviewaudit::rater;
namespace llm = reviewaudit::llm;
using nlohmann::ordered_json;
using testsup::TempDir;

namespace {

std::string minimal_manifest_json(const std::string& experiment) {
  ordered_json j;
  j["experiment"] = experiment;
  j["corpus_path"] = "papers.jsonl";
  j["output_path"] = "report.json";
  return j.dump();
}

audit::Manifest mock_manifest(const TempDir& dir, const std::string& experiment,
                              const std::string& corpus_path) {
  ordered_json j;
  j["experiment"] = experiment;
  j["corpus_path"] = corpus_path;
  j["output_path"] = dir.str("report.json");
  j["use_mock"] = true;
  j["offline"] = true;
  j["cache_dir"] = dir.str("cache");
  j["seed"] = 7;
  return audit::parse_manifest(j.dump());
}

llm::Client mock_client(const TempDir& dir) {
  return llm::Client(std::make_shared<llm::MockBackend>(),
                     llm::ClientOptions{dir.str("cache")});
}

}  // namespace

TEST_CASE("experiment names round-trip") {
  using audit::Experiment;
  for (const Experiment e :
       {Experiment::InjectDetect, Experiment::ReviewGenerate, Experiment::ConsistencyAudit,
        Experiment::ImplicitAudit, Experiment::AblationProbe, Experiment::AuthorshipProbe,
        Experiment::LengthProbe, Experiment::RankSim, Experiment::RegressionDiag})
    CHECK(audit::experiment_from_string(audit::to_string(e)) == e);
  CHECK_THROWS_AS(audit::experiment_from_string("mystery"), reviewaudit::InvalidManifest);
}

TEST_CASE("manifests parse with defaults and reject unknown or bad fields") {
  const audit::Manifest m = audit::parse_manifest(minimal_manifest_json("rank-sim"));
  CHECK(m.experiment == audit::Experiment::RankSim);
  CHECK(m.seed == 0);
  CHECK(m.trials == 100);
  CHECK(m.offline_matcher);
  CHECK(m.cache_enabled);
  CHECK(m.fractions == std::vector<double>{0.0, 0.05, 0.1, 0.2});
  CHECK(m.match_threshold == 7);
  CHECK(m.jobs == 1);

  CHECK_THROWS_AS(audit::parse_manifest("not json"), reviewaudit::InvalidManifest);
  CHECK_THROWS_AS(audit::parse_manifest("[]"), reviewaudit::InvalidManifest);
  CHECK_THROWS_AS(audit::parse_manifest("{}"), reviewaudit::InvalidManifest);

  ordered_json j = ordered_json::parse(minimal_manifest_json("rank-sim"));
  j["surprise"] = 1;
  CHECK_THROWS_AS(audit::parse_manifest(j.dump()), reviewaudit::InvalidManifest);

  for (const auto& [key, value] : std::vector<std::pair<std::string, ordered_json>>{
           {"match_threshold", 4},
           {"match_threshold", 11},
           {"fractions", ordered_json::array({0.5, 1.5})},
           {"fractions", ordered_json::array()},
           {"trials", 0},
           {"flow_fraction", -0.2},
           {"buckets", 0},
           {"positive_threshold", 0},
           {"jobs", 0},
           {"max_tokens", 0},
           {"seed", "seven"}}) {
    ordered_json bad = ordered_json::parse(minimal_manifest_json("rank-sim"));
    bad[key] = value;
    CAPTURE(key);
    CHECK_THROWS_AS(audit::parse_manifest(bad.dump()), reviewaudit::InvalidManifest);
  }

  ordered_json original = ordered_json::parse(minimal_manifest_json("review-generate"));
  original["authorship"] = "original";
  CHECK_THROWS_AS(audit::parse_manifest(original.dump()), reviewaudit::InvalidManifest);
  original["author_name"] = "Pat Doe";
  CHECK(audit::parse_manifest(original.dump()).author_name == "Pat Doe");
}

TEST_CASE("manifest echo shows every effective value") {
  const audit::Manifest m = audit::parse_manifest(minimal_manifest_json("length-probe"));
  const ordered_json echo = audit::manifest_json(m);
  CHECK(echo["experiment"] == "length-probe");
  CHECK(echo["trials"] == 100);
  CHECK(echo["offline_matcher"] == true);
  CHECK(echo["content_mode"] == "full");
  CHECK(echo["authorship"] == "double-blind");
  CHECK(echo["llm_source"] == "manipulated");
  // The echo itself parses back to an equivalent manifest.
  const audit::Manifest back = audit::parse_manifest(echo.dump());
  CHECK(audit::manifest_json(back) == echo);
}

TEST_CASE("manifest files load from disk") {
  TempDir dir("manifest");
  const std::string path = dir.str("m.json");
  reviewaudit::write_file(path, minimal_manifest_json("inject-detect"));
  CHECK(audit::load_manifest(path).experiment == audit::Experiment::InjectDetect);
  CHECK_THROWS_AS(audit::load_manifest(dir.str("absent.json")),
                  reviewaudit::InvalidManifest);
}

TEST_CASE("corpus lines round-trip through the jsonl writer") {
  rater::PaperRecord rec;
  rec.paper_id = "X1";
  rec.decision = rater::Decision::Poster;
  rec.human_ratings = {4, 7};
  rec.pdf_path = "/abs/x1.pdf";
  rec.review_texts = {"review one", "review two"};
  rec.limitations_text = "Scope is narrow.";
  rec.clean_llm_rating = 5;
  rec.manipulated_llm_rating = 8;
  rec.token_count = 1234;

  const std::string jsonl = audit::corpus_jsonl({rec});
  const rater::PaperRecord back =
      audit::parse_corpus_line(jsonl.substr(0, jsonl.size() - 1), "test");
  CHECK(back.paper_id == rec.paper_id);
  CHECK(back.decision == rec.decision);
  CHECK(back.human_ratings == rec.human_ratings);
  CHECK(back.pdf_path == rec.pdf_path);
  CHECK(back.review_texts == rec.review_texts);
  CHECK(back.limitations_text == rec.limitations_text);
  CHECK(back.clean_llm_rating == rec.clean_llm_rating);
  CHECK(back.manipulated_llm_rating == rec.manipulated_llm_rating);
  CHECK(back.token_count == rec.token_count);

  // Optional fields are omitted, not emitted as null.
  rater::PaperRecord bare;
  bare.paper_id = "X2";
  bare.human_ratings = {5};
  const std::string bare_line = audit::corpus_jsonl({bare});
  CHECK(bare_line.find("clean_llm_rating") == std::string::npos);
  CHECK(bare_line.find("decision") == std::string::npos);
}

TEST_CASE("corpus validation names every broken line") {
  CHECK_THROWS_AS(audit::parse_corpus_line("{}", "w"), reviewaudit::CorpusReadError);
  CHECK_THROWS_AS(audit::parse_corpus_line(R"({"paper_id": "a"})", "w"),
                  reviewaudit::CorpusReadError);
  CHECK_THROWS_AS(
      audit::parse_corpus_line(R"({"paper_id": "a", "human_ratings": [0]})", "w"),
      reviewaudit::CorpusReadError);
  CHECK_THROWS_AS(
      audit::parse_corpus_line(R"({"paper_id": "a", "human_ratings": [11]})", "w"),
      reviewaudit::CorpusReadError);

  TempDir dir("corpus");
  const std::string path = dir.str("papers.jsonl");
  reviewaudit::write_file(path,
                          R"({"paper_id": "ok", "human_ratings": [5]})"
                          "\n\n"
                          R"({"paper_id": "bad", "human_ratings": [99]})"
                          "\n"
                          R"({"paper_id": "ok", "human_ratings": [6]})"
                          "\n");
  try {
    audit::load_corpus(path);
    FAIL("expected CorpusReadError");
  } catch (const reviewaudit::CorpusReadError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("2 bad corpus line(s)") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);   // out-of-range rating
    CHECK(msg.find("duplicate paper_id") != std::string::npos);
  }
  CHECK_THROWS_AS(audit::load_corpus(dir.str("missing.jsonl")),
                  reviewaudit::CorpusReadError);
}

TEST_CASE("relative pdf paths resolve against the corpus directory") {
  TempDir dir("paths");
  std::filesystem::create_directories(dir.path() / "sub");
  const std::string path = dir.str("sub/papers.jsonl");
  reviewaudit::write_file(
      path, R"({"paper_id": "a", "human_ratings": [5], "pdf_path": "pdf/a.pdf"})"
            "\n");
  const auto records = audit::load_corpus(path);
  REQUIRE(records.size() == 1);
  CHECK(records[0].pdf_path == (dir.path() / "sub" / "pdf" / "a.pdf").string());
}

TEST_CASE("the bundled payload is instruction-shaped and extraction-safe") {
  const std::string& payload = audit::default_attack_payload();
  CHECK_FALSE(payload.empty());
  // Each line must end a sentence so text extraction keeps lines intact.
  std::size_t start = 0;
  for (;;) {
    const std::size_t nl = payload.find('\n', start);
    const std::string line =
        nl == std::string::npos ? payload.substr(start) : payload.substr(start, nl - start);
    REQUIRE_FALSE(line.empty());
    const char last = line.back();
    CHECK((last == '.' || last == '!' || last == '?' || last == ':'));
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
}

TEST_CASE("the model id defaults by backend") {
  audit::Manifest m;
  CHECK(audit::effective_model(m) == "gpt-4o");
  m.use_mock = true;
  CHECK(audit::effective_model(m) == "offline-mock-1");
  m.model = "custom-2";
  CHECK(audit::effective_model(m) == "custom-2");
}

TEST_CASE("the fixture generator writes a runnable corpus deterministically") {
  TempDir dir("fixtures");
  audit::FixtureOptions opts;
  opts.papers = 6;
  const audit::FixtureCorpus fc = audit::generate_fixture_corpus(dir.str("a"), opts);
  CHECK(fc.records.size() == 6);
  CHECK(fc.pdf_paths.size() == 6);
  CHECK(fc.manifest_paths.size() == 9);
  for (const auto& p : fc.pdf_paths) CHECK(std::filesystem::exists(p));
  for (const auto& p : fc.manifest_paths) CHECK_NOTHROW(audit::load_manifest(p.string()));

  const auto loaded = audit::load_corpus(fc.corpus_path.string());
  REQUIRE(loaded.size() == 6);
  CHECK(loaded[0].paper_id == "P001");
  CHECK(loaded[5].paper_id == "P006");
  for (const auto& rec : loaded) {
    CHECK(rec.human_ratings.size() >= 2);
    CHECK(std::filesystem::exists(rec.pdf_path));
    CHECK_FALSE(rec.review_texts.empty());
  }

  const audit::FixtureCorpus again = audit::generate_fixture_corpus(dir.str("b"), opts);
  CHECK(reviewaudit::read_file(fc.corpus_path.string()) ==
        reviewaudit::read_file(again.corpus_path.string()));
  for (std::size_t i = 0; i < fc.pdf_paths.size(); ++i)
    CHECK(reviewaudit::read_file(fc.pdf_paths[i].string()) ==
          reviewaudit::read_file(again.pdf_paths[i].string()));

  audit::FixtureOptions no_manifests;
  no_manifests.papers = 2;
  no_manifests.write_manifests = false;
  CHECK(audit::generate_fixture_corpus(dir.str("c"), no_manifests).manifest_paths.empty());
}

TEST_CASE("the injection experiment recovers its payload on every fixture paper") {
  TempDir dir("run-inject");
  const audit::FixtureCorpus fc = audit::generate_fixture_corpus(
      dir.str("corpus"), audit::FixtureOptions{6, 7, false});
  const audit::Manifest m = mock_manifest(dir, "inject-detect", fc.corpus_path.string());
  const audit::ExperimentResult res = audit::run_inject_detect(m, fc.records);
  CHECK(res.failed_items == 0);
  CHECK(res.summary["papers"] == 6);
  CHECK(res.summary["payload_recovered"] == 6);
  CHECK(res.summary["all_recovered"] == true);
  for (const auto& item : res.items) CHECK(item["status"] == "ok");
}

TEST_CASE("a paper without its pdf becomes an error item, not a crash") {
  TempDir dir("run-missing");
  const audit::FixtureCorpus fc = audit::generate_fixture_corpus(
      dir.str("corpus"), audit::FixtureOptions{3, 7, false});
  std::vector<rater::PaperRecord> records = fc.records;
  records[1].pdf_path = dir.str("gone.pdf");
  const audit::Manifest m = mock_manifest(dir, "inject-detect", fc.corpus_path.string());
  const audit::ExperimentResult res = audit::run_inject_detect(m, records);
  CHECK(res.failed_items == 1);
  REQUIRE(res.items.size() == 3);
  CHECK(res.items[0]["status"] == "ok");
  CHECK(res.items[1]["status"] == "error");
  CHECK(res.items[1].contains("error"));
  CHECK(res.items[1].contains("error_kind"));
  CHECK(res.items[2]["status"] == "ok");
}

TEST_CASE("the consistency audit reports the rating shift under manipulation") {
  TempDir dir("run-consistency");
  const audit::FixtureCorpus fc = audit::generate_fixture_corpus(
      dir.str("corpus"), audit::FixtureOptions{6, 7, false});
  const audit::Manifest m = mock_manifest(dir, "consistency-audit", fc.corpus_path.string());
  llm::Client client = mock_client(dir);
  const audit::ExperimentResult res = audit::run_consistency_audit(m, fc.records, client);
  CHECK(res.failed_items == 0);
  CHECK(res.summary["rating_shift"].get<double>() > 0.0);
  CHECK(res.summary["mean_manipulated_rating"].get<double>() >
        res.summary["mean_clean_rating"].get<double>());
}

TEST_CASE("experiment dispatch runs the manifest's experiment") {
  TempDir dir("dispatch");
  const audit::FixtureCorpus fc = audit::generate_fixture_corpus(
      dir.str("corpus"), audit::FixtureOptions{6, 7, false});
  const audit::Manifest m = mock_manifest(dir, "rank-sim", fc.corpus_path.string());
  llm::Client client = mock_client(dir);
  const audit::ExperimentResult res = audit::run_experiment(m, fc.records, client);
  CHECK(res.summary["trials"] == 100);
  CHECK(res.summary.contains("curve_csv"));
  CHECK(res.summary["flow"]["matrix"].size() == 4);
  CHECK_FALSE(res.reference_targets.empty());
}

TEST_CASE("reports are schema-valid and reproducible") {
  TempDir dir("report");
  const audit::FixtureCorpus fc = audit::generate_fixture_corpus(
      dir.str("corpus"), audit::FixtureOptions{3, 7, false});
  const audit::Manifest m = mock_manifest(dir, "inject-detect", fc.corpus_path.string());
  const audit::ExperimentResult res = audit::run_inject_detect(m, fc.records);

  audit::ReportContext ctx;
  ctx.model = "offline-mock-1";
  ctx.backend = "mock";
  ctx.created_at = "2026-01-01T00:00:00Z";
  const ordered_json report = audit::build_report(m, res, ctx);
  CHECK(audit::report_schema_problems(report).empty());
  CHECK(report["tool"] == "review-audit");
  CHECK(report["provenance"]["matcher"] == "token-overlap");

  const ordered_json repeat = audit::build_report(m, res, ctx);
  CHECK(report.dump() == repeat.dump());

  ordered_json broken = report;
  broken.erase("summary");
  broken["items"][0]["status"] = "odd";
  const auto problems = audit::report_schema_problems(broken);
  CHECK(problems.size() == 2);
}

TEST_CASE("report files land as json plus markdown") {
  TempDir dir("write");
  ordered_json report;
  report["tool"] = "review-audit";
  report["experiment"] = "inject-detect";
  report["created_at"] = "2026-01-01T00:00:00Z";
  report["provenance"] = {{"model", "m"}, {"backend", "mock"}, {"matcher", "token-overlap"},
                          {"seed", 7}, {"cache", {{"hits", 0}, {"misses", 0}}}};
  report["failed_items"] = 0;
  report["items"] = ordered_json::array();
  report["summary"] = ordered_json::object();
  report["reference_targets"] = ordered_json::object();

  const std::string out = dir.str("sub/report.json");
  audit::write_report_files(out, report);
  CHECK(std::filesystem::exists(out));
  CHECK(std::filesystem::exists(dir.str("sub/report.md")));
  const std::string md = reviewaudit::read_file(dir.str("sub/report.md"));
  CHECK(md.rfind("# review-audit report: inject-detect", 0) == 0);
  CHECK(md.find("- items: 0 (all ok)") != std::string::npos);
  CHECK(nlohmann::json::parse(reviewaudit::read_file(out)) == report);
}

TEST_CASE("timestamps are ISO 8601 UTC") {
  const std::string ts = audit::iso8601_utc_now();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts[19] == 'Z');
}
