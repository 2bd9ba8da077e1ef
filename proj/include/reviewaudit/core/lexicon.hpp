#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "reviewaudit/core/text.hpp"

namespace reviewaudit::lexicon {

// Small fixed vocabularies backing the deterministic offline model and the
// keyword-based review rater. Tokens are matched lowercase.

inline const std::vector<std::string>& positive_words() {
  static const std::vector<std::string> words = {
      "novel",       "strong",    "significant", "thorough", "convincing",
      "clear",       "promising", "solid",       "robust",   "comprehensive",
      "interesting", "effective", "impressive",  "rigorous", "excellent",
  };
  return words;
}

inline const std::vector<std::string>& negative_words() {
  static const std::vector<std::string> words = {
      "lack",       "lacks",        "lacking", "missing",  "unclear",
      "weak",       "weakness",     "weaknesses", "limited",  "limitation",
      "limitations", "insufficient", "concern", "concerns", "issue",
      "issues",     "fails",        "failing", "marginal", "overclaims",
      "absent",     "incomplete",
  };
  return words;
}

// Tokens that mark a sentence as describing a weakness or limitation; used
// to pull "key points" out of free-form review text.
inline const std::vector<std::string>& weakness_cues() {
  static const std::vector<std::string> words = {
      "lack",        "lacks",     "lacking",  "missing",    "unclear",
      "weak",        "weakness",  "weaknesses", "limited",  "limitation",
      "limitations", "insufficient", "concern", "concerns", "issue",
      "issues",      "absent",    "fails",    "failing",    "incomplete",
  };
  return words;
}

// Vocabulary hinting that text is talking to a reviewer rather than about
// the paper; dense occurrence near the end of a submission is the signature
// of an embedded instruction block.
inline const std::vector<std::string>& review_meta_words() {
  static const std::vector<std::string> words = {
      "review",   "reviewer", "accept", "acceptance", "strengths",
      "weaknesses", "rating", "emphasize", "instructions",
  };
  return words;
}

// Transparent baseline rater: 5 plus the count of distinct positive words
// minus the count of distinct negative words, clamped to [1, 10].
inline int keyword_sentiment_rating(const std::string& review_text) {
  const std::set<std::string> tokens = text::token_set(review_text);
  int pos = 0, neg = 0;
  for (const std::string& w : positive_words())
    if (tokens.count(w)) ++pos;
  for (const std::string& w : negative_words())
    if (tokens.count(w)) ++neg;
  return std::clamp(5 + pos - neg, 1, 10);
}

}  // namespace reviewaudit::lexicon
