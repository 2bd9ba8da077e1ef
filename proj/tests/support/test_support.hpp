#pragma once

// Shared helpers for the test suites: scratch directories, scripted model
// backends, random-input generators, and independent oracle implementations
// used to cross-check the library's numerics.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/rng.hpp"
#include "reviewaudit/llm/backend.hpp"
#include "reviewaudit/rater/record.hpp"

namespace testsup {

// Scratch directory removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    dir_ = std::filesystem::temp_directory_path() /
           ("reviewaudit-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return dir_; }
  std::string str(const std::string& rel = {}) const {
    return rel.empty() ? dir_.string() : (dir_ / rel).string();
  }

private:
  std::filesystem::path dir_;
};

// Backend that replays a fixed list of outcomes. An outcome is either a
// response body or an error kind to throw ("unavailable", "quota").
class ScriptedBackend : public reviewaudit::llm::Backend {
public:
  struct Step {
    std::string content;  // used when kind is empty
    std::string kind;     // "", "unavailable", or "quota"
  };

  explicit ScriptedBackend(std::vector<Step> steps) : steps_(std::move(steps)) {}

  reviewaudit::llm::ChatResponse complete(const reviewaudit::llm::ChatRequest& req) override {
    (void)req;
    const std::size_t i = calls_.fetch_add(1);
    const Step& step = i < steps_.size() ? steps_[i] : steps_.back();
    if (step.kind == "unavailable")
      throw reviewaudit::BackendUnavailable("scripted failure");
    if (step.kind == "quota") throw reviewaudit::QuotaExceeded("scripted 429");
    reviewaudit::llm::ChatResponse resp;
    resp.content = step.content;
    resp.model = "scripted-1";
    return resp;
  }

  int calls() const { return static_cast<int>(calls_.load()); }

private:
  std::vector<Step> steps_;
  std::atomic<std::size_t> calls_{0};
};

// Wraps another backend and counts the calls that reach it.
class CountingBackend : public reviewaudit::llm::Backend {
public:
  explicit CountingBackend(std::shared_ptr<reviewaudit::llm::Backend> inner)
      : inner_(std::move(inner)) {}

  reviewaudit::llm::ChatResponse complete(const reviewaudit::llm::ChatRequest& req) override {
    calls_.fetch_add(1);
    return inner_->complete(req);
  }

  int calls() const { return static_cast<int>(calls_.load()); }

private:
  std::shared_ptr<reviewaudit::llm::Backend> inner_;
  std::atomic<int> calls_{0};
};

// Transport that fails the test run if anything tries to use it.
class PoisonedTransport : public reviewaudit::llm::HttpTransport {
public:
  reviewaudit::llm::HttpResult post_json(
      const std::string&, const std::string&, const std::string&,
      const std::vector<std::pair<std::string, std::string>>&) override {
    attempts.fetch_add(1);
    throw reviewaudit::BackendUnavailable("network use is forbidden in this test");
  }

  std::atomic<int> attempts{0};
};

inline std::string random_word(reviewaudit::SplitMix64& rng) {
  static const char* bank[] = {
      "model",   "data",    "training", "signal",  "metric",  "layer",
      "graph",   "sample",  "batch",    "loss",    "reward",  "policy",
      "encoder", "decoder", "token",    "memory",  "cache",   "budget",
      "latency", "scaling", "transfer", "routing", "margin",  "kernel",
  };
  return bank[rng.next_below(sizeof(bank) / sizeof(bank[0]))];
}

inline std::string random_sentence(reviewaudit::SplitMix64& rng, int min_words,
                                   int max_words) {
  const int n = min_words + static_cast<int>(rng.next_below(
                                static_cast<std::uint64_t>(max_words - min_words + 1)));
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (!out.empty()) out += " ";
    out += random_word(rng);
  }
  return out + ".";
}

inline std::vector<reviewaudit::rater::PaperRecord> random_rated_corpus(
    reviewaudit::SplitMix64& rng, int papers, int min_ratings = 1, int max_ratings = 5) {
  std::vector<reviewaudit::rater::PaperRecord> records;
  for (int i = 0; i < papers; ++i) {
    reviewaudit::rater::PaperRecord r;
    r.paper_id = "R" + std::to_string(i + 1);
    const int n = min_ratings + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(
                                    max_ratings - min_ratings + 1)));
    for (int k = 0; k < n; ++k)
      r.human_ratings.push_back(1 + static_cast<int>(rng.next_below(10)));
    r.clean_llm_rating = 1 + static_cast<int>(rng.next_below(10));
    r.manipulated_llm_rating = std::min(10, *r.clean_llm_rating + 3);
    records.push_back(std::move(r));
  }
  return records;
}

// -- independent oracles -----------------------------------------------------

// Pooled mean absolute pairwise gap, by direct enumeration.
inline double brute_discrepancy(const std::vector<reviewaudit::rater::PaperRecord>& records) {
  double total = 0.0;
  long long pairs = 0;
  for (const auto& rec : records) {
    const auto& r = rec.human_ratings;
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = i + 1; j < r.size(); ++j) {
        total += std::abs(static_cast<double>(r[i]) - static_cast<double>(r[j]));
        ++pairs;
      }
  }
  return pairs == 0 ? -1.0 : total / static_cast<double>(pairs);
}

// Rank-sum AUC with midranks for ties: an algebraically different route
// than pair counting.
inline double ranksum_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }
  double pos_rank_sum = 0.0;
  double np = 0.0, nn = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (labels[k] == 1) {
      pos_rank_sum += rank[k];
      np += 1.0;
    } else {
      nn += 1.0;
    }
  }
  if (np == 0.0 || nn == 0.0) return -1.0;
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

struct GdFit {
  double intercept = 0.0;
  double slope = 0.0;
  bool converged = false;
};

// Gradient-ascent logistic fit on standardized x, with step halving.
// Purposely shares no code with the library's IRLS implementation.
inline GdFit gradient_descent_logistic(const std::vector<double>& x,
                                       const std::vector<int>& y) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(n));
  const double scale = sd > 0 ? sd : 1.0;

  auto loglik = [&](double b0, double b1) {
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = b0 + b1 * (x[i] - mean) / scale;
      // log sigmoid computed stably on both branches
      const double log_p = z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
      const double log_q = z >= 0 ? -z - std::log1p(std::exp(-z)) : -std::log1p(std::exp(z));
      ll += y[i] == 1 ? log_p : log_q;
    }
    return ll;
  };

  double b0 = 0.0, b1 = 0.0;
  double step = 0.5;
  double ll = loglik(b0, b1);
  GdFit fit;
  for (int iter = 0; iter < 200000; ++iter) {
    double g0 = 0.0, g1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = b0 + b1 * (x[i] - mean) / scale;
      const double p = z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                              : std::exp(z) / (1.0 + std::exp(z));
      const double d = static_cast<double>(y[i]) - p;
      g0 += d;
      g1 += d * (x[i] - mean) / scale;
    }
    if (std::max(std::abs(g0), std::abs(g1)) < 1e-10) {
      fit.converged = true;
      break;
    }
    for (;;) {
      const double nb0 = b0 + step * g0 / static_cast<double>(n);
      const double nb1 = b1 + step * g1 / static_cast<double>(n);
      const double nll = loglik(nb0, nb1);
      if (nll >= ll - 1e-15) {
        b0 = nb0;
        b1 = nb1;
        ll = nll;
        step *= 1.1;
        break;
      }
      step *= 0.5;
      if (step < 1e-14) break;
    }
    if (step < 1e-14) break;
  }
  fit.slope = b1 / scale;
  fit.intercept = b0 - b1 * mean / scale;
  return fit;
}

}  // namespace testsup
