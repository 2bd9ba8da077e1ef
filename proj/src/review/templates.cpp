#include "reviewaudit/review/templates.hpp"

#include "reviewaudit/core/text.hpp"

namespace reviewaudit::review {

const Template& structured_review_template() {
  static const Template tpl{
      "structured-review-v1", "structured-review",
      "Task: structured-review\n"
      "You are a careful peer reviewer for a machine learning venue. Read the\n"
      "submission below and write a structured review.\n"
      "=== Title ===\n"
      "{title}\n"
      "=== Authors ===\n"
      "{authors}\n"
      "=== Abstract ===\n"
      "{abstract}\n"
      "=== Main Text ===\n"
      "{main_text}\n"
      "=== End ===\n"
      "Write exactly four sections with these headings, one heading per line,\n"
      "each followed by its content:\n"
      "Significance And Novelty\n"
      "Reasons To Accept\n"
      "Reasons To Reject\n"
      "Suggestions For Improvement\n"};
  return tpl;
}

const Template& summarize_keypoints_template() {
  static const Template tpl{
      "summarize-key-points-v1", "summarize-key-points",
      "Task: summarize-key-points\n"
      "Extract the key points of criticism from the review below. Respond with\n"
      "a JSON object mapping point number to a short sentence, for example\n"
      "{\"1\": \"The evaluation lacks baselines.\"}.\n"
      "=== Review Text ===\n"
      "{review}\n"
      "=== End ===\n"};
  return tpl;
}

const Template& match_keypoints_template() {
  static const Template tpl{
      "match-key-points-v1", "match-key-points",
      "Task: match-key-points\n"
      "Score how well each point in set A matches each point in set B on a\n"
      "scale from 5 (unrelated) to 10 (identical point). Respond with a JSON\n"
      "object mapping \"aID-bID\" to [score, explanation].\n"
      "=== Set A ===\n"
      "{set_a}\n"
      "=== Set B ===\n"
      "{set_b}\n"
      "=== End ===\n"};
  return tpl;
}

const Template& rate_review_template() {
  static const Template tpl{
      "rate-review-v1", "rate-review",
      "Task: rate-review\n"
      "You are an area chair. Based on the review below, rate the submission's\n"
      "overall quality on a scale from 1 to 10. End your answer with the exact\n"
      "format: Rating: [[rating]].\n"
      "=== Review Text ===\n"
      "{review}\n"
      "=== End ===\n"};
  return tpl;
}

std::string render_template(const Template& tpl,
                            const std::vector<std::pair<std::string, std::string>>& slots) {
  std::string out = tpl.text;
  for (const auto& [name, value] : slots) {
    const std::string placeholder = "{" + name + "}";
    std::size_t at = 0;
    while ((at = out.find(placeholder, at)) != std::string::npos) {
      out.replace(at, placeholder.size(), value);
      at += value.size();
    }
  }
  return out;
}

std::string slot_marker(const std::string& name) { return "=== " + name + " ==="; }

std::string extract_slot(const std::string& prompt, const std::string& name) {
  const std::string marker = slot_marker(name) + "\n";
  const std::size_t start = prompt.find(marker);
  if (start == std::string::npos) return {};
  const std::size_t body = start + marker.size();
  std::size_t end = prompt.find("\n=== ", body);
  if (end == std::string::npos) end = prompt.size();
  return prompt.substr(body, end - body);
}

std::string prompt_task(const std::string& prompt) {
  if (prompt.rfind("Task: ", 0) != 0) return {};
  const std::size_t eol = prompt.find('\n');
  return prompt.substr(6, eol == std::string::npos ? std::string::npos : eol - 6);
}

}  // namespace reviewaudit::review
