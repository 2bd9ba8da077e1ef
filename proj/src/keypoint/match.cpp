#include <cstdio>
#include <vector>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"
#include "reviewaudit/core/text.hpp"
#include "reviewaudit/keypoint/keypoint.hpp"
#include "reviewaudit/keypoint/pipeline.hpp"
#include "reviewaudit/review/templates.hpp"

namespace reviewaudit::keypoint {

namespace {

MatchEdge score_pair(const std::pair<std::string, std::string>& a,
                     const std::set<std::string>& a_tokens,
                     const std::pair<std::string, std::string>& b,
                     const std::set<std::string>& b_tokens) {
  const double j = text::jaccard(a_tokens, b_tokens);
  MatchEdge e;
  e.a_id = a.first;
  e.b_id = b.first;
  e.score = score_from_jaccard(j);
  char buf[48];
  std::snprintf(buf, sizeof buf, "token overlap %.2f", j);
  e.explanation = buf;
  return e;
}

std::vector<std::set<std::string>> tokenize_points(const KeyPointSet& s) {
  std::vector<std::set<std::string>> out;
  out.reserve(s.points.size());
  for (const auto& [id, point_text] : s.points) out.push_back(text::token_set(point_text));
  return out;
}

}  // namespace

MatchSet offline_match_serial(const KeyPointSet& a, const KeyPointSet& b) {
  MatchSet m;
  m.a_source = a.source_id;
  m.b_source = b.source_id;
  const auto a_tokens = tokenize_points(a);
  const auto b_tokens = tokenize_points(b);
  m.edges.reserve(a.points.size() * b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i)
    for (std::size_t j = 0; j < b.points.size(); ++j)
      m.edges.push_back(score_pair(a.points[i], a_tokens[i], b.points[j], b_tokens[j]));
  return m;
}

MatchSet offline_match(const KeyPointSet& a, const KeyPointSet& b) {
#ifdef _OPENMP
  MatchSet m;
  m.a_source = a.source_id;
  m.b_source = b.source_id;
  const auto a_tokens = tokenize_points(a);
  const auto b_tokens = tokenize_points(b);
  const std::size_t rows = a.points.size();
  const std::size_t cols = b.points.size();
  m.edges.resize(rows * cols);
  // Each cell is independent; write into a preallocated slot so the edge
  // order matches the serial implementation exactly.
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < static_cast<long long>(rows * cols); ++k) {
    const std::size_t i = static_cast<std::size_t>(k) / cols;
    const std::size_t j = static_cast<std::size_t>(k) % cols;
    m.edges[static_cast<std::size_t>(k)] =
        score_pair(a.points[i], a_tokens[i], b.points[j], b_tokens[j]);
  }
  return m;
#else
  return offline_match_serial(a, b);
#endif
}

namespace {

// One "valid JSON only" nudge before giving up on a malformed reply.
llm::ChatResponse repair_json_reply(llm::Client& client, const llm::ChatRequest& original,
                                    const std::string& bad_content) {
  llm::ChatRequest repair = original;
  repair.messages.push_back({"assistant", bad_content});
  repair.messages.push_back({"user", "Reply with valid JSON only."});
  return client.complete(repair);
}

}  // namespace

KeyPointSet summarize_review(llm::Client& client, const std::string& model,
                             const std::string& review_text, std::string source_id,
                             int max_tokens) {
  if (text::trim(review_text).empty()) {
    KeyPointSet empty;
    empty.source_id = std::move(source_id);
    return empty;
  }
  const review::Template& tpl = review::summarize_keypoints_template();
  llm::ChatRequest req;
  req.model = model;
  req.max_tokens = max_tokens;
  req.messages.push_back({"user", review::render_template(tpl, {{"review", review_text}})});
  const llm::ChatResponse resp = client.complete(req);
  try {
    return parse_summary_response(resp.content, source_id);
  } catch (const MalformedSummary& e) {
    log::warn(std::string("summary reply was not JSON (") + e.what() + "); asking again");
    const llm::ChatResponse second = repair_json_reply(client, req, resp.content);
    return parse_summary_response(second.content, std::move(source_id));
  }
}

MatchSet match_sets_remote(llm::Client& client, const std::string& model,
                           const KeyPointSet& a, const KeyPointSet& b, int max_tokens) {
  const review::Template& tpl = review::match_keypoints_template();
  llm::ChatRequest req;
  req.model = model;
  req.max_tokens = max_tokens;
  req.messages.push_back(
      {"user", review::render_template(
                   tpl, {{"set_a", keypoint_set_json(a).dump()},
                         {"set_b", keypoint_set_json(b).dump()}})});
  const llm::ChatResponse resp = client.complete(req);
  try {
    return parse_match_response(resp.content, a, b);
  } catch (const MalformedMatch& e) {
    log::warn(std::string("match reply was not usable (") + e.what() + "); asking again");
    const llm::ChatResponse second = repair_json_reply(client, req, resp.content);
    return parse_match_response(second.content, a, b);
  }
}

}  // namespace reviewaudit::keypoint
