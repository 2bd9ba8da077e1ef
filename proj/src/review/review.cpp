#include <array>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"
#include "reviewaudit/core/text.hpp"
#include "reviewaudit/review/review.hpp"
#include "reviewaudit/review/templates.hpp"

namespace reviewaudit::review {

namespace {

// Which review section a heading-like line opens, or -1.
int heading_slot(const std::string& line) {
  std::string t = text::trim(line);
  // Strip common markdown decoration before matching.
  while (!t.empty() && (t.front() == '#' || t.front() == '*' || t.front() == '-')) t.erase(0, 1);
  while (!t.empty() && (t.back() == '*' || t.back() == ':')) t.pop_back();
  t = text::trim(t);
  if (t.empty() || t.size() > 60) return -1;
  const std::string lower = text::to_lower(t);
  const bool wordy = lower.find(' ') != std::string::npos || lower.size() < 30;
  if (!wordy) return -1;
  if (lower.find("significance") != std::string::npos ||
      lower.find("novelty") != std::string::npos)
    return 0;
  if (lower.find("accept") != std::string::npos) return 1;
  if (lower.find("reject") != std::string::npos) return 2;
  if (lower.find("suggestion") != std::string::npos ||
      lower.find("improvement") != std::string::npos)
    return 3;
  return -1;
}

}  // namespace

StructuredReview parse_review_response(const std::string& content) {
  std::array<std::string, 4> sections;
  std::array<bool, 4> seen{};
  int current = -1;
  for (const std::string& line : text::split_lines(content)) {
    const int slot = heading_slot(line);
    if (slot >= 0 && !seen[static_cast<std::size_t>(slot)]) {
      current = slot;
      seen[static_cast<std::size_t>(slot)] = true;
      continue;
    }
    if (current < 0) continue;  // preamble before the first heading
    std::string& dst = sections[static_cast<std::size_t>(current)];
    if (!dst.empty()) dst += "\n";
    dst += line;
  }

  const int found = static_cast<int>(seen[0]) + seen[1] + seen[2] + seen[3];
  if (found == 0)
    throw MalformedReview("review response has none of the expected section headings",
                          content);
  if (found < 4)
    log::warn("review response is missing " + std::to_string(4 - found) +
              " of 4 sections");

  StructuredReview r;
  r.significance = text::trim(sections[0]);
  r.reasons_accept = text::trim(sections[1]);
  r.reasons_reject = text::trim(sections[2]);
  r.suggestions = text::trim(sections[3]);
  r.raw = content;
  return r;
}

StructuredReview generate_review(llm::Client& client, const std::string& model,
                                 const pdf::ParsedPaper& paper, ContentMode mode,
                                 const AuthorshipProfile& authors, int max_tokens) {
  llm::ChatRequest req;
  req.model = model;
  req.max_tokens = max_tokens;
  req.messages.push_back({"user", build_review_prompt(paper, mode, authors)});
  const llm::ChatResponse resp = client.complete(req);
  return parse_review_response(resp.content);
}

}  // namespace reviewaudit::review
