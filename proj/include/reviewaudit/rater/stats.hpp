#pragma once

#include <cstddef>
#include <vector>

#include "reviewaudit/rater/record.hpp"

namespace reviewaudit::rater {

struct RatingErrorStats {
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  std::size_t n = 0;
};

// Elementwise prediction errors. Throws LengthMismatch and EmptyInput.
RatingErrorStats rating_errors(const std::vector<double>& predicted,
                               const std::vector<double>& actual);

// Mean absolute difference over all unordered pairs of the ratings a paper
// received — the reviewer-disagreement measure. Throws NoPairs for fewer
// than two ratings.
double mean_pairwise_discrepancy(const std::vector<double>& ratings);
double mean_pairwise_discrepancy(const std::vector<int>& ratings);

// Corpus-level disagreement: sum of pairwise gaps across every paper's
// rating list, divided by the total pair count. Papers with fewer than two
// ratings contribute nothing; throws NoPairs when no paper has a pair.
double human_discrepancy(const std::vector<PaperRecord>& records);

// Share of ratings at or above the threshold. Throws EmptyInput.
double positive_ratio(const std::vector<int>& ratings, int threshold = 6);

}  // namespace reviewaudit::rater
