#include "reviewaudit/rater/stats.hpp"

#include <cmath>

#include "reviewaudit/core/error.hpp"

namespace reviewaudit::rater {

RatingErrorStats rating_errors(const std::vector<double>& predicted,
                               const std::vector<double>& actual) {
  if (predicted.size() != actual.size())
    throw LengthMismatch("predicted and actual rating lists differ in length");
  if (predicted.empty()) throw EmptyInput("no rating pairs to score");
  RatingErrorStats s;
  s.n = predicted.size();
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - actual[i];
    s.mae += std::abs(d);
    s.mse += d * d;
  }
  s.mae /= static_cast<double>(s.n);
  s.mse /= static_cast<double>(s.n);
  s.rmse = std::sqrt(s.mse);
  return s;
}

double mean_pairwise_discrepancy(const std::vector<double>& ratings) {
  if (ratings.size() < 2)
    throw NoPairs("need at least two ratings to measure disagreement");
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    for (std::size_t j = i + 1; j < ratings.size(); ++j) {
      total += std::abs(ratings[i] - ratings[j]);
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

double mean_pairwise_discrepancy(const std::vector<int>& ratings) {
  return mean_pairwise_discrepancy(std::vector<double>(ratings.begin(), ratings.end()));
}

double human_discrepancy(const std::vector<PaperRecord>& records) {
  double total = 0.0;
  long long pairs = 0;
  for (const PaperRecord& rec : records) {
    const std::vector<int>& r = rec.human_ratings;
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (std::size_t j = i + 1; j < r.size(); ++j) {
        total += std::abs(r[i] - r[j]);
        ++pairs;
      }
    }
  }
  if (pairs == 0)
    throw NoPairs("no paper carries two or more ratings, so disagreement is undefined");
  return total / static_cast<double>(pairs);
}

double positive_ratio(const std::vector<int>& ratings, int threshold) {
  if (ratings.empty()) throw EmptyInput("positive ratio of an empty rating list");
  std::size_t hits = 0;
  for (const int r : ratings)
    if (r >= threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(ratings.size());
}

}  // namespace reviewaudit::rater
