#pragma once

#include <optional>
#include <string>
#include <vector>

namespace reviewaudit::rater {

enum class Decision { Unknown, Oral, Spotlight, Poster, Rejected, Withdrawn };

const char* to_string(Decision d);
Decision decision_from_string(const std::string& name);  // unknown strings -> Unknown

// One paper of a corpus, as loaded from a papers.jsonl line. Optional
// fields stay unset when the line omits them.
struct PaperRecord {
  std::string paper_id;
  Decision decision = Decision::Unknown;
  std::vector<int> human_ratings;
  std::string pdf_path;
  std::vector<std::string> review_texts;
  std::string limitations_text;
  std::optional<int> clean_llm_rating;
  std::optional<int> manipulated_llm_rating;
  std::optional<long long> token_count;
};

}  // namespace reviewaudit::rater
