#pragma once

#include <string>
#include <vector>

namespace reviewaudit::review {

// Prompt templates are versioned; reports record which ids produced their
// responses. Every prompt opens with a "Task: <name>" line the offline
// model dispatches on, and fills named slots delimited by "=== Name ===".

struct Template {
  std::string id;    // e.g. "structured-review-v1"
  std::string task;  // sentinel after "Task: "
  std::string text;  // body with {slot} placeholders
};

const Template& structured_review_template();
const Template& summarize_keypoints_template();
const Template& match_keypoints_template();
const Template& rate_review_template();

// Replaces each "{name}" with its value; unknown placeholders are left
// intact so missing data is visible in the prompt rather than silently "".
std::string render_template(const Template& tpl,
                            const std::vector<std::pair<std::string, std::string>>& slots);

// Slot helpers shared by the renderer and the offline model.
std::string slot_marker(const std::string& name);                       // "=== Name ===" line
std::string extract_slot(const std::string& prompt, const std::string& name);
std::string prompt_task(const std::string& prompt);  // "" when no Task line

}  // namespace reviewaudit::review
