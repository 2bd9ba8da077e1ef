// Compares the OpenMP-parallel kernels against their serial reference
// implementations on synthetic workloads: pairwise key-point matching,
// the ranking displacement curve, and AUC pair counting. Results must be
// identical; the parallel variants exist purely for speed.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "reviewaudit/core/rng.hpp"
#include "reviewaudit/keypoint/keypoint.hpp"
#include "reviewaudit/ranksim/displace.hpp"
#include "reviewaudit/stats/stats.hpp"

namespace ra = reviewaudit;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count();
}

std::string random_sentence(ra::SplitMix64& rng, int words) {
  static const char* vocab[] = {
      "model",  "data",   "training", "evaluation", "baseline", "metric",
      "layer",  "graph",  "sampling", "batch",      "loss",     "gradient",
      "policy", "reward", "encoder",  "decoder",    "token",    "memory",
      "cache",  "budget", "latency",  "accuracy",   "scaling",  "transfer",
  };
  constexpr int n = static_cast<int>(sizeof(vocab) / sizeof(vocab[0]));
  std::string out;
  for (int w = 0; w < words; ++w) {
    if (!out.empty()) out += " ";
    out += vocab[rng.next_below(n)];
  }
  return out + ".";
}

ra::keypoint::KeyPointSet random_points(ra::SplitMix64& rng, int count, const char* src) {
  ra::keypoint::KeyPointSet set;
  set.source_id = src;
  for (int i = 0; i < count; ++i)
    set.points.emplace_back(std::to_string(i + 1),
                            random_sentence(rng, 8 + static_cast<int>(rng.next_below(8))));
  return set;
}

bool same_matches(const ra::keypoint::MatchSet& a, const ra::keypoint::MatchSet& b) {
  if (a.edges.size() != b.edges.size()) return false;
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    if (a.edges[i].a_id != b.edges[i].a_id || a.edges[i].b_id != b.edges[i].b_id ||
        a.edges[i].score != b.edges[i].score)
      return false;
  }
  return true;
}

std::vector<ra::rater::PaperRecord> random_corpus(ra::SplitMix64& rng, int papers) {
  std::vector<ra::rater::PaperRecord> records;
  for (int i = 0; i < papers; ++i) {
    ra::rater::PaperRecord r;
    r.paper_id = "B" + std::to_string(i + 1);
    const int ratings = 3 + static_cast<int>(rng.next_below(3));
    for (int k = 0; k < ratings; ++k)
      r.human_ratings.push_back(1 + static_cast<int>(rng.next_below(10)));
    r.clean_llm_rating = 1 + static_cast<int>(rng.next_below(10));
    r.manipulated_llm_rating = std::min(10, *r.clean_llm_rating + 3);
    records.push_back(std::move(r));
  }
  return records;
}

bool same_curve(const std::vector<ra::ranksim::CurvePoint>& a,
                const std::vector<ra::ranksim::CurvePoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].fraction != b[i].fraction || a[i].mean != b[i].mean ||
        a[i].stddev != b[i].stddev)
      return false;
  return true;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s %10.1f ms %10.1f ms   x%-5.2f %s\n", name, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              identical ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, %d thread(s)\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both columns run serially\n");
#endif
  std::printf("%-22s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

  bool all_identical = true;

  {
    ra::SplitMix64 rng(ra::derive_seed(42, "bench-match"));
    const auto a = random_points(rng, 400, "a");
    const auto b = random_points(rng, 400, "b");
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = ra::keypoint::offline_match_serial(a, b);
    const double serial_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = ra::keypoint::offline_match(a, b);
    const double parallel_ms = ms_since(t0);
    const bool ok = same_matches(serial, parallel);
    all_identical = all_identical && ok;
    report("pairwise matching", serial_ms, parallel_ms, ok);
  }

  {
    ra::SplitMix64 rng(ra::derive_seed(42, "bench-curve"));
    const auto records = random_corpus(rng, 300);
    ra::ranksim::CurveOptions opts;
    opts.trials = 400;
    opts.seed = 99;
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = ra::ranksim::displacement_curve_serial(records, opts);
    const double serial_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = ra::ranksim::displacement_curve(records, opts);
    const double parallel_ms = ms_since(t0);
    const bool ok = same_curve(serial, parallel);
    all_identical = all_identical && ok;
    report("displacement curve", serial_ms, parallel_ms, ok);
  }

  {
    // Pair counting is O(positives x negatives); size the input accordingly.
    ra::SplitMix64 rng(ra::derive_seed(42, "bench-auc"));
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 30'000; ++i) {
      scores.push_back(static_cast<double>(rng.next_below(1000)));
      labels.push_back(static_cast<int>(rng.next_below(2)));
    }
    auto t0 = std::chrono::steady_clock::now();
    const double serial = ra::stats::auc_serial(scores, labels);
    const double serial_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const double parallel = ra::stats::auc(scores, labels);
    const double parallel_ms = ms_since(t0);
    const bool ok = serial == parallel;
    all_identical = all_identical && ok;
    report("auc pair counting", serial_ms, parallel_ms, ok);
  }

  return all_identical ? 0 : 1;
}
