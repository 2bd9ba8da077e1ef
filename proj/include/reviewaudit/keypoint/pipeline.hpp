#pragma once

#include <string>

#include "reviewaudit/keypoint/keypoint.hpp"
#include "reviewaudit/llm/client.hpp"

namespace reviewaudit::keypoint {

// Summarizes free-form review text into numbered points via the model.
KeyPointSet summarize_review(llm::Client& client, const std::string& model,
                             const std::string& review_text, std::string source_id,
                             int max_tokens = 512);

// Scores all point pairs via the model instead of the offline matcher.
MatchSet match_sets_remote(llm::Client& client, const std::string& model,
                           const KeyPointSet& a, const KeyPointSet& b,
                           int max_tokens = 1024);

}  // namespace reviewaudit::keypoint
