#include "reviewaudit/rater/training.hpp"

#include "json.hpp"
#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/rng.hpp"
#include "reviewaudit/rater/rating.hpp"
#include "reviewaudit/review/templates.hpp"

namespace reviewaudit::rater {

TrainingSplit prepare_training_set(const std::vector<std::pair<std::string, int>>& pairs,
                                   const TrainingOptions& opts) {
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  SplitMix64 rng(derive_seed(opts.seed, "training-shuffle"));
  rng.shuffle(order);

  std::map<int, std::size_t> kept_per_rating;
  std::vector<TrainingExample> examples;
  for (const std::size_t idx : order) {
    const auto& [review_text, rating] = pairs[idx];
    if (rating < 1 || rating > 10)
      throw OutOfRange("training rating " + std::to_string(rating) + " outside 1..10");
    if (const auto cap = opts.rating_caps.find(rating); cap != opts.rating_caps.end()) {
      if (kept_per_rating[rating] >= cap->second) continue;
    }
    ++kept_per_rating[rating];
    TrainingExample ex;
    ex.instruction = review::render_template(review::rate_review_template(),
                                             {{"review", review_text}});
    ex.response = format_rating_line(rating);
    examples.push_back(std::move(ex));
  }
  if (examples.empty()) throw EmptyInput("no training pairs after downsampling");

  const std::size_t n_train =
      static_cast<std::size_t>(opts.train_fraction * static_cast<double>(examples.size()));
  TrainingSplit split;
  split.train.assign(examples.begin(), examples.begin() + static_cast<long>(n_train));
  split.eval.assign(examples.begin() + static_cast<long>(n_train), examples.end());
  return split;
}

std::string training_jsonl(const std::vector<TrainingExample>& examples) {
  std::string out;
  for (const TrainingExample& ex : examples) {
    nlohmann::ordered_json j;
    j["instruction"] = ex.instruction;
    j["response"] = ex.response;
    out += j.dump();
    out += "\n";
  }
  return out;
}

}  // namespace reviewaudit::rater
