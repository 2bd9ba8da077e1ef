#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/rng.hpp"
#include "reviewaudit/ranksim/displace.hpp"
#include "reviewaudit/ranksim/ranking.hpp"
#include "support/test_support.hpp"

namespace ranksim = reviewaudit::ranksim;
namespace rater = reviewaudit::rater;
using reviewaudit::SplitMix64;

namespace {

rater::PaperRecord paper(std::string id, std::vector<int> ratings) {
  rater::PaperRecord r;
  r.paper_id = std::move(id);
  r.human_ratings = std::move(ratings);
  return r;
}

// Ten papers with a clean rating spread; model ratings lift every paper.
std::vector<rater::PaperRecord> spread_corpus() {
  std::vector<rater::PaperRecord> records;
  for (int i = 0; i < 10; ++i) {
    rater::PaperRecord r = paper("S" + std::to_string(i), {1 + i % 10, 1 + (i + 3) % 10});
    const int clean = static_cast<int>((r.human_ratings[0] + r.human_ratings[1] + 1) / 2);
    r.clean_llm_rating = clean;
    r.manipulated_llm_rating = std::min(10, clean + 3);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace

TEST_CASE("aggregate rating is the mean of a paper's ratings") {
  CHECK(ranksim::aggregate_rating(paper("a", {4, 6, 8})) == doctest::Approx(6.0));
  CHECK_THROWS_AS(ranksim::aggregate_rating(paper("a", {})),
                  reviewaudit::RecordWithoutRatings);
}

TEST_CASE("ranking is best-first with id tie-breaks and even percentiles") {
  const std::vector<rater::PaperRecord> records = {
      paper("mid", {5}), paper("best", {9}), paper("tie-b", {7}), paper("tie-a", {7})};
  const std::vector<ranksim::RankedPaper> ranked = ranksim::rank_papers(records);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].paper_id == "best");
  CHECK(ranked[1].paper_id == "tie-a");
  CHECK(ranked[2].paper_id == "tie-b");
  CHECK(ranked[3].paper_id == "mid");
  CHECK(ranked[0].percentile == 0.0);
  CHECK(ranked[1].percentile == 25.0);
  CHECK(ranked[3].percentile == 75.0);
  CHECK_THROWS_AS(ranksim::rank_papers({}), reviewaudit::EmptyInput);
}

TEST_CASE("top fraction uses a strict percentile cutoff") {
  const auto ranked = ranksim::rank_papers(
      {paper("a", {9}), paper("b", {8}), paper("c", {7}), paper("d", {6})});
  CHECK(ranksim::top_fraction(ranked, 30.0) == std::vector<std::string>{"a", "b"});
  CHECK(ranksim::top_fraction(ranked, 25.0) == std::vector<std::string>{"a"});
  CHECK(ranksim::top_fraction(ranked, 100.0).size() == 4);
}

TEST_CASE("displacement counts departures from the original top band") {
  const std::vector<rater::PaperRecord> before_records = {
      paper("a", {10}), paper("b", {9}), paper("c", {8}), paper("d", {7}),
      paper("e", {6}), paper("f", {5}), paper("g", {4}), paper("h", {3}),
      paper("i", {2}), paper("j", {1})};
  const auto before = ranksim::rank_papers(before_records);
  CHECK(ranksim::top_k_displacement(before, before) == 0.0);

  // Push one of the three top papers below the cutoff.
  std::vector<rater::PaperRecord> after_records = before_records;
  after_records[2].human_ratings = {1};  // "c" falls out, one of 3 leaves
  const auto after = ranksim::rank_papers(after_records);
  CHECK(ranksim::top_k_displacement(before, after) == doctest::Approx(100.0 / 3.0));

  CHECK_THROWS_AS(ranksim::top_k_displacement(before, after, 0.0), reviewaudit::OutOfRange);
  CHECK_THROWS_AS(ranksim::top_k_displacement(before, after, 101.0),
                  reviewaudit::OutOfRange);
  const auto other = ranksim::rank_papers({paper("z", {5})});
  CHECK_THROWS_AS(ranksim::top_k_displacement(before, other), reviewaudit::IdSetMismatch);
}

TEST_CASE("percentile bands") {
  CHECK(ranksim::section_of_percentile(0.0) == 0);
  CHECK(ranksim::section_of_percentile(29.999) == 0);
  CHECK(ranksim::section_of_percentile(30.0) == 1);
  CHECK(ranksim::section_of_percentile(49.999) == 1);
  CHECK(ranksim::section_of_percentile(50.0) == 2);
  CHECK(ranksim::section_of_percentile(69.999) == 2);
  CHECK(ranksim::section_of_percentile(70.0) == 3);
  CHECK(ranksim::section_of_percentile(99.0) == 3);
  CHECK(ranksim::section_labels().size() == 4);
}

TEST_CASE("an unchanged ranking flows only along the diagonal") {
  const auto ranked = ranksim::rank_papers(spread_corpus());
  const ranksim::FlowMatrix flow = ranksim::section_flow(ranked, ranked);
  long long diagonal = 0, total = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      total += flow[i][j];
      if (i == j) diagonal += flow[i][j];
    }
  CHECK(total == 10);
  CHECK(diagonal == 10);
}

TEST_CASE("flow rows always sum to the original band sizes") {
  SplitMix64 rng(909);
  for (int trial = 0; trial < 50; ++trial) {
    const auto records =
        testsup::random_rated_corpus(rng, 2 + static_cast<int>(rng.next_below(40)), 1, 5);
    const auto before = ranksim::rank_papers(records);
    const auto after = ranksim::rank_papers(
        ranksim::replace_reviews(records, 0.3, ranksim::LlmSource::Manipulated, trial));
    const ranksim::FlowMatrix flow = ranksim::section_flow(before, after);

    std::map<int, long long> band_sizes;
    for (const ranksim::RankedPaper& p : before)
      ++band_sizes[ranksim::section_of_percentile(p.percentile)];
    for (std::size_t i = 0; i < 4; ++i) {
      long long row = 0;
      for (std::size_t j = 0; j < 4; ++j) row += flow[i][j];
      CHECK(row == band_sizes[static_cast<int>(i)]);
    }
  }
}

TEST_CASE("review replacement swaps exactly the sampled share of slots") {
  const std::vector<rater::PaperRecord> records = spread_corpus();  // 20 review slots

  const auto none =
      ranksim::replace_reviews(records, 0.0, ranksim::LlmSource::Manipulated, 5);
  for (std::size_t i = 0; i < records.size(); ++i)
    CHECK(none[i].human_ratings == records[i].human_ratings);

  const auto all = ranksim::replace_reviews(records, 1.0, ranksim::LlmSource::Manipulated, 5);
  for (const rater::PaperRecord& r : all)
    for (const int rating : r.human_ratings) CHECK(rating == *r.manipulated_llm_rating);

  const auto clean = ranksim::replace_reviews(records, 1.0, ranksim::LlmSource::Clean, 5);
  for (const rater::PaperRecord& r : clean)
    for (const int rating : r.human_ratings) CHECK(rating == *r.clean_llm_rating);

  // fraction 0.25 of 20 slots -> exactly 5 changed values.
  const auto some =
      ranksim::replace_reviews(records, 0.25, ranksim::LlmSource::Manipulated, 5);
  int changed = 0;
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t j = 0; j < records[i].human_ratings.size(); ++j)
      if (some[i].human_ratings[j] != records[i].human_ratings[j]) ++changed;
  CHECK(changed <= 5);  // a swap can coincide with the original value
  const auto again =
      ranksim::replace_reviews(records, 0.25, ranksim::LlmSource::Manipulated, 5);
  for (std::size_t i = 0; i < records.size(); ++i)
    CHECK(some[i].human_ratings == again[i].human_ratings);

  CHECK_THROWS_AS(ranksim::replace_reviews(records, -0.1, ranksim::LlmSource::Clean, 1),
                  reviewaudit::OutOfRange);
  CHECK_THROWS_AS(ranksim::replace_reviews(records, 1.5, ranksim::LlmSource::Clean, 1),
                  reviewaudit::OutOfRange);
}

TEST_CASE("a sampled paper without its model rating is an error") {
  std::vector<rater::PaperRecord> records = {paper("only", {5})};
  records[0].clean_llm_rating = 6;  // no manipulated rating
  CHECK_THROWS_AS(
      ranksim::replace_reviews(records, 1.0, ranksim::LlmSource::Manipulated, 1),
      reviewaudit::MissingLlmRating);
  CHECK_NOTHROW(ranksim::replace_reviews(records, 1.0, ranksim::LlmSource::Clean, 1));
}

TEST_CASE("a zero replacement fraction displaces nothing") {
  const auto records = spread_corpus();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ranksim::DisplacementTrial t =
        ranksim::run_trial(records, 0.0, seed, ranksim::LlmSource::Manipulated);
    CHECK(t.displaced_pct == 0.0);
  }
}

TEST_CASE("source names round-trip") {
  CHECK(ranksim::llm_source_from_string("clean") == ranksim::LlmSource::Clean);
  CHECK(ranksim::llm_source_from_string("manipulated") == ranksim::LlmSource::Manipulated);
  CHECK_THROWS_AS(ranksim::llm_source_from_string("boosted"), reviewaudit::InvalidManifest);
}

TEST_CASE("displacement curves are deterministic and match the serial reference") {
  const auto records = spread_corpus();
  ranksim::CurveOptions opts;
  opts.trials = 40;
  opts.seed = 123;
  const auto parallel = ranksim::displacement_curve(records, opts);
  const auto serial = ranksim::displacement_curve_serial(records, opts);
  const auto repeat = ranksim::displacement_curve(records, opts);
  CHECK(ranksim::curve_csv(parallel) == ranksim::curve_csv(serial));
  CHECK(ranksim::curve_csv(parallel) == ranksim::curve_csv(repeat));
  REQUIRE(parallel.size() == 4);
  CHECK(parallel[0].fraction == 0.0);
  CHECK(parallel[0].mean == 0.0);
  CHECK(parallel[0].stddev == 0.0);

  ranksim::CurveOptions single;
  single.trials = 1;
  single.fractions = {0.2};
  CHECK(ranksim::displacement_curve(records, single)[0].stddev == 0.0);

  ranksim::CurveOptions bad;
  bad.trials = 0;
  CHECK_THROWS_AS(ranksim::displacement_curve(records, bad), reviewaudit::InsufficientData);
}

TEST_CASE("curve csv has a header and one row per fraction") {
  const std::vector<ranksim::CurvePoint> curve = {{0.0, 0.0, 0.0}, {0.1, 12.5, 3.25}};
  const std::string csv = ranksim::curve_csv(curve);
  CHECK(csv.rfind("fraction,mean,std\n", 0) == 0);
  CHECK(csv.find("0.100000,12.500000,3.250000\n") != std::string::npos);
}

TEST_CASE("inflated model ratings push papers into the top band") {
  const auto records = spread_corpus();
  ranksim::CurveOptions opts;
  opts.trials = 60;
  opts.seed = 9;
  const auto curve = ranksim::displacement_curve(records, opts);
  CHECK(curve[1].mean > 0.0);             // 5% replacement already displaces
  CHECK(curve[3].mean >= curve[1].mean);  // heavier replacement displaces no less
}

TEST_CASE("accumulated flow preserves paper counts across trials") {
  const auto records = spread_corpus();
  const int trials = 25;
  const ranksim::FlowResult flow =
      ranksim::flow_matrix(records, 0.1, trials, 77, ranksim::LlmSource::Manipulated);
  CHECK(flow.trials == trials);
  long long total = 0;
  for (const auto& row : flow.totals)
    for (const long long v : row) total += v;
  CHECK(total == trials * static_cast<long long>(records.size()));

  const nlohmann::ordered_json j = ranksim::flow_json(flow);
  CHECK(j["fraction"] == 0.1);
  CHECK(j["trials"] == trials);
  CHECK(j["labels"].size() == 4);
  REQUIRE(j["matrix"].size() == 4);
  CHECK(j["matrix"][0].size() == 4);
}
