#include "reviewaudit/rater/rating.hpp"

#include <regex>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/lexicon.hpp"
#include "reviewaudit/rater/record.hpp"
#include "reviewaudit/review/templates.hpp"

namespace reviewaudit::rater {

const char* to_string(Decision d) {
  switch (d) {
    case Decision::Oral: return "oral";
    case Decision::Spotlight: return "spotlight";
    case Decision::Poster: return "poster";
    case Decision::Rejected: return "rejected";
    case Decision::Withdrawn: return "withdrawn";
    case Decision::Unknown: break;
  }
  return "unknown";
}

Decision decision_from_string(const std::string& name) {
  if (name == "oral") return Decision::Oral;
  if (name == "spotlight") return Decision::Spotlight;
  if (name == "poster") return Decision::Poster;
  if (name == "rejected" || name == "reject") return Decision::Rejected;
  if (name == "withdrawn") return Decision::Withdrawn;
  return Decision::Unknown;
}

int parse_rating(const std::string& content) {
  static const std::regex pattern(R"(Rating:\s*\[\[\s*(-?\d+)\s*\]\])");
  std::smatch m;
  if (!std::regex_search(content, m, pattern))
    throw PatternNotFound("no 'Rating: [[n]]' in response");
  const long long value = std::stoll(m[1].str());
  if (value < 1 || value > 10)
    throw OutOfRange("rating " + std::to_string(value) + " outside 1..10");
  return static_cast<int>(value);
}

std::string format_rating_line(int rating) {
  if (rating < 1 || rating > 10)
    throw OutOfRange("rating " + std::to_string(rating) + " outside 1..10");
  return "Rating: [[" + std::to_string(rating) + "]].";
}

int keyword_rating(const std::string& review_text) {
  return lexicon::keyword_sentiment_rating(review_text);
}

int rate_review_remote(llm::Client& client, const std::string& model,
                       const std::string& review_text, int max_tokens) {
  llm::ChatRequest req;
  req.model = model;
  req.max_tokens = max_tokens;
  req.messages.push_back(
      {"user", review::render_template(review::rate_review_template(),
                                       {{"review", review_text}})});
  return parse_rating(client.complete(req).content);
}

}  // namespace reviewaudit::rater
