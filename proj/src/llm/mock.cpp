#include "reviewaudit/llm/mock.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/lexicon.hpp"
#include "reviewaudit/core/text.hpp"
#include "reviewaudit/keypoint/keypoint.hpp"
#include "reviewaudit/review/templates.hpp"

namespace reviewaudit::llm {

namespace {

using review::extract_slot;

const std::string& last_user_content(const ChatRequest& req) {
  for (auto it = req.messages.rbegin(); it != req.messages.rend(); ++it)
    if (it->role == "user") return it->content;
  throw BackendUnavailable("offline model needs a user message");
}

std::vector<std::string> weakness_sentences(const std::string& source, std::size_t cap) {
  std::vector<std::string> out;
  for (const std::string& sentence : text::split_sentences(source)) {
    const std::set<std::string> tokens = text::token_set(sentence);
    for (const std::string& cue : lexicon::weakness_cues()) {
      if (tokens.count(cue)) {
        out.push_back(text::trim(sentence));
        break;
      }
    }
    if (out.size() >= cap) break;
  }
  return out;
}

// The tail of a submission is where smuggled reviewer instructions live.
// Returns those lines when the trailing text is dense in reviewer-facing
// vocabulary; empty otherwise.
std::vector<std::string> detect_instruction_block(const std::string& main_text) {
  std::vector<std::string> tail;
  const std::vector<std::string> lines = text::split_lines(main_text);
  for (auto it = lines.rbegin(); it != lines.rend() && tail.size() < 6; ++it)
    if (!text::trim(*it).empty()) tail.push_back(text::trim(*it));
  std::reverse(tail.begin(), tail.end());

  std::set<std::string> meta_hits;
  for (const std::string& line : tail) {
    const std::set<std::string> tokens = text::token_set(line);
    for (const std::string& w : lexicon::review_meta_words())
      if (tokens.count(w)) meta_hits.insert(w);
  }
  if (meta_hits.size() < 3) return {};

  std::vector<std::string> block;
  for (const std::string& line : tail) {
    const std::set<std::string> tokens = text::token_set(line);
    for (const std::string& w : lexicon::review_meta_words()) {
      if (tokens.count(w)) {
        block.push_back(line);
        break;
      }
    }
  }
  return block;
}

std::string compose_review(const std::string& prompt) {
  const std::string title = text::trim(extract_slot(prompt, "Title"));
  const std::string abstract = extract_slot(prompt, "Abstract");
  const std::string main_text = extract_slot(prompt, "Main Text");

  std::string significance, accept, reject, suggestions;
  const std::vector<std::string> instructions = detect_instruction_block(main_text);
  if (!instructions.empty()) {
    significance =
        "The submission addresses an important problem and the contribution "
        "appears significant and novel.";
    accept = "The paper merits acceptance.";
    for (const std::string& line : instructions) accept += " " + line;
    reject = "None noted.";
    suggestions = "No major revisions appear necessary.";
  } else {
    significance = title.empty()
                       ? "The work studies the stated problem. The direction is relevant."
                       : "The work studies \"" + title + "\". The direction is relevant.";
    const std::vector<std::string> abstract_sentences = text::split_sentences(abstract);
    accept = abstract_sentences.empty()
                 ? "The problem setting is plausible."
                 : text::trim(abstract_sentences.front());
    accept += " The problem setting is clearly motivated.";
    const std::vector<std::string> weak =
        weakness_sentences(abstract + "\n" + main_text, 6);
    if (weak.empty()) {
      reject = "The evaluation would benefit from broader coverage and the "
               "claims feel incomplete in places.";
    } else {
      for (const std::string& w : weak) {
        if (!reject.empty()) reject += "\n";
        reject += "- " + w;
      }
    }
    suggestions =
        "Address the points above, expand the evaluation, and state the "
        "assumptions explicitly.";
  }

  std::string out;
  out += "Significance And Novelty\n" + significance + "\n";
  out += "Reasons To Accept\n" + accept + "\n";
  out += "Reasons To Reject\n" + reject + "\n";
  out += "Suggestions For Improvement\n" + suggestions + "\n";
  return out;
}

std::string compose_summary(const std::string& prompt) {
  const std::string review_text = extract_slot(prompt, "Review Text");
  std::vector<std::string> points = weakness_sentences(review_text, 10);
  if (points.empty()) {
    const std::vector<std::string> sentences = text::split_sentences(review_text);
    for (std::size_t i = 0; i < sentences.size() && points.size() < 3; ++i) {
      const std::string s = text::trim(sentences[i]);
      if (!s.empty()) points.push_back(s);
    }
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::string p = points[i];
    if (!p.empty() && p.front() == '-') p = text::trim(p.substr(1));
    j[std::to_string(i + 1)] = p;
  }
  return j.dump();
}

std::string compose_match(const std::string& prompt) {
  keypoint::KeyPointSet a, b;
  try {
    a = keypoint::keypoint_set_from_json(extract_slot(prompt, "Set A"), "a");
    b = keypoint::keypoint_set_from_json(extract_slot(prompt, "Set B"), "b");
  } catch (const Error& e) {
    throw BackendUnavailable(std::string("offline model cannot parse point sets: ") +
                             e.what());
  }
  return keypoint::match_set_json(keypoint::offline_match(a, b)).dump();
}

std::string compose_rating(const std::string& prompt) {
  const int rating = lexicon::keyword_sentiment_rating(extract_slot(prompt, "Review Text"));
  return "Based on the review, the submission appears to merit this score.\nRating: [[" +
         std::to_string(rating) + "]].";
}

}  // namespace

ChatResponse MockBackend::complete(const ChatRequest& req) {
  const std::string& prompt = last_user_content(req);
  const std::string task = review::prompt_task(prompt);

  std::string content;
  if (task == review::structured_review_template().task) {
    content = compose_review(prompt);
  } else if (task == review::summarize_keypoints_template().task) {
    content = compose_summary(prompt);
  } else if (task == review::match_keypoints_template().task) {
    content = compose_match(prompt);
  } else if (task == review::rate_review_template().task) {
    content = compose_rating(prompt);
  } else {
    throw BackendUnavailable("offline model does not recognize the prompt task");
  }

  ChatResponse resp;
  resp.content = std::move(content);
  resp.model = "offline-mock-1";
  resp.usage.prompt_tokens = static_cast<long long>(text::count_tokens(prompt));
  resp.usage.completion_tokens = static_cast<long long>(text::count_tokens(resp.content));
  return resp;
}

}  // namespace reviewaudit::llm
