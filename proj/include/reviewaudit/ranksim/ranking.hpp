#pragma once

#include <array>
#include <string>
#include <vector>

#include "reviewaudit/rater/record.hpp"

namespace reviewaudit::ranksim {

struct RankedPaper {
  std::string paper_id;
  double aggregate = 0.0;   // mean human rating
  double percentile = 0.0;  // 0 is best; 100 * rank_index / n
};

// Mean of the paper's human ratings. Throws RecordWithoutRatings.
double aggregate_rating(const rater::PaperRecord& record);

// Best-first ranking; ties broken by paper id so ordering is total.
// Throws EmptyInput.
std::vector<RankedPaper> rank_papers(const std::vector<rater::PaperRecord>& records);

// Papers ranked strictly above the percentile cutoff (percentile < cutoff).
std::vector<std::string> top_fraction(const std::vector<RankedPaper>& ranking,
                                      double cutoff_percentile);

// 100 * |top-k(before) \ top-k(after)| / |top-k(before)|: the share of
// originally top-ranked papers pushed out by the re-ranking. Throws
// IdSetMismatch when the two rankings cover different papers and OutOfRange
// for a cutoff outside (0, 100].
double top_k_displacement(const std::vector<RankedPaper>& before,
                          const std::vector<RankedPaper>& after, double k_percent = 30.0);

using FlowMatrix = std::array<std::array<long long, 4>, 4>;

// Entry (i, j) counts papers moving from percentile band i to band j; row
// sums therefore equal the before-state band sizes. Throws IdSetMismatch.
FlowMatrix section_flow(const std::vector<RankedPaper>& before,
                        const std::vector<RankedPaper>& after);

// Percentile bands used to report rank movement.
int section_of_percentile(double percentile);  // 0..3
const std::array<const char*, 4>& section_labels();

}  // namespace reviewaudit::ranksim
