#pragma once

#include <string>

#include "reviewaudit/llm/client.hpp"

namespace reviewaudit::rater {

// Extracts the first "Rating: [[n]]" from model output. Throws
// PatternNotFound when absent and OutOfRange when n is outside 1..10.
int parse_rating(const std::string& content);

// The canonical answer format the rater is asked (and fine-tuned) to emit.
std::string format_rating_line(int rating);

// Keyword-baseline rating of review text; mirrors the offline model.
int keyword_rating(const std::string& review_text);

// Asks the model to rate a review on the 1..10 scale.
int rate_review_remote(llm::Client& client, const std::string& model,
                       const std::string& review_text, int max_tokens = 128);

}  // namespace reviewaudit::rater
