#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace reviewaudit::rater {

struct TrainingOptions {
  std::uint64_t seed = 0;
  double train_fraction = 0.9;
  // Per-rating keep limits applied after shuffling; ratings without an
  // entry are kept in full. Used to downsample over-represented scores.
  std::map<int, std::size_t> rating_caps;
};

struct TrainingExample {
  std::string instruction;  // full rating prompt containing the review
  std::string response;     // "Rating: [[n]]."
};

struct TrainingSplit {
  std::vector<TrainingExample> train;
  std::vector<TrainingExample> eval;
};

// Builds a shuffled, optionally downsampled, train/eval split from
// (review text, rating) pairs. Deterministic in the seed. Throws EmptyInput
// when no pairs survive and OutOfRange for ratings outside 1..10.
TrainingSplit prepare_training_set(const std::vector<std::pair<std::string, int>>& pairs,
                                   const TrainingOptions& opts);

// One JSON object per line: {"instruction": ..., "response": ...}.
std::string training_jsonl(const std::vector<TrainingExample>& examples);

}  // namespace reviewaudit::rater
