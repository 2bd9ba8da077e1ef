#include "reviewaudit/keypoint/keypoint.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"

namespace reviewaudit::keypoint {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

// Numeric-aware ordering so "2" sorts before "10".
bool id_less(const std::string& x, const std::string& y) {
  if (all_digits(x) && all_digits(y)) {
    if (x.size() != y.size()) return x.size() < y.size();
  }
  return x < y;
}

// Models love wrapping JSON in fences or prose; keep the outermost braces.
std::string isolate_json_object(const std::string& content) {
  const std::size_t open = content.find('{');
  const std::size_t close = content.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open) return {};
  return content.substr(open, close - open + 1);
}

}  // namespace

KeyPointSet keypoint_set_from_json(const std::string& json_text, std::string source_id) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedSummary(std::string("key-point set is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw MalformedSummary("key-point set must be a JSON object");
  KeyPointSet set;
  set.source_id = std::move(source_id);
  // Ids are renumbered 1..n in arrival order; backends may emit sparse or
  // non-numeric keys, and every consumer relies on dense ids.
  int next_id = 1;
  for (const auto& [id, value] : j.items()) {
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    if (text.empty()) {
      log::warn("dropping empty key point '" + id + "'");
      continue;
    }
    set.points.emplace_back(std::to_string(next_id++), std::move(text));
  }
  return set;
}

nlohmann::ordered_json keypoint_set_json(const KeyPointSet& set) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [id, text] : set.points) j[id] = text;
  return j;
}

KeyPointSet parse_summary_response(const std::string& content, std::string source_id) {
  const std::string body = isolate_json_object(content);
  if (body.empty())
    throw MalformedSummary("summary response contains no JSON object");
  return keypoint_set_from_json(body, std::move(source_id));
}

int score_from_jaccard(double jaccard) {
  const int score = 5 + static_cast<int>(std::lround(5.0 * jaccard));
  return std::clamp(score, 5, 10);
}

MatchSet parse_match_response(const std::string& content, const KeyPointSet& a,
                              const KeyPointSet& b) {
  const std::string body = isolate_json_object(content);
  if (body.empty()) throw MalformedMatch("match response contains no JSON object");
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedMatch(std::string("match response is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw MalformedMatch("match response must be a JSON object");

  std::set<std::string> a_ids, b_ids;
  for (const auto& [id, text] : a.points) a_ids.insert(id);
  for (const auto& [id, text] : b.points) b_ids.insert(id);

  MatchSet out;
  out.a_source = a.source_id;
  out.b_source = b.source_id;
  for (const auto& [key, value] : j.items()) {
    // Split "aID-bID" at the dash that yields two known ids.
    std::string left, right;
    int splits = 0;
    for (std::size_t at = key.find('-'); at != std::string::npos;
         at = key.find('-', at + 1)) {
      const std::string l = key.substr(0, at);
      const std::string r = key.substr(at + 1);
      if (a_ids.count(l) && b_ids.count(r)) {
        left = l;
        right = r;
        ++splits;
      }
    }
    if (splits == 0)
      throw MalformedMatch("pair key '" + key + "' does not name known points");
    if (splits > 1) throw MalformedMatch("pair key '" + key + "' is ambiguous");

    MatchEdge edge;
    edge.a_id = left;
    edge.b_id = right;
    if (value.is_array() && !value.empty() && value[0].is_number()) {
      const int raw = static_cast<int>(std::lround(value[0].get<double>()));
      edge.score = std::clamp(raw, 5, 10);
      if (edge.score != raw)
        log::warn("match score " + std::to_string(raw) + " for '" + key +
                  "' clamped to " + std::to_string(edge.score));
      if (value.size() > 1 && value[1].is_string())
        edge.explanation = value[1].get<std::string>();
    } else if (value.is_number()) {
      const int raw = static_cast<int>(std::lround(value.get<double>()));
      edge.score = std::clamp(raw, 5, 10);
    } else {
      throw MalformedMatch("pair '" + key + "' must map to [score, explanation]");
    }
    out.edges.push_back(std::move(edge));
  }
  return out;
}

nlohmann::ordered_json match_set_json(const MatchSet& matches) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const MatchEdge& e : matches.edges) {
    nlohmann::ordered_json pair = nlohmann::ordered_json::array();
    pair.push_back(e.score);
    pair.push_back(e.explanation);
    j[e.a_id + "-" + e.b_id] = std::move(pair);
  }
  return j;
}

std::vector<const MatchEdge*> valid_edges(const MatchSet& matches, int threshold) {
  std::vector<const MatchEdge*> sorted;
  sorted.reserve(matches.edges.size());
  for (const MatchEdge& e : matches.edges)
    if (e.score >= threshold) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const MatchEdge* x, const MatchEdge* y) {
                     if (x->score != y->score) return x->score > y->score;
                     if (x->a_id != y->a_id) return id_less(x->a_id, y->a_id);
                     return id_less(x->b_id, y->b_id);
                   });
  std::vector<const MatchEdge*> kept;
  std::set<std::string> used_a, used_b;
  for (const MatchEdge* e : sorted) {
    if (used_a.count(e->a_id) || used_b.count(e->b_id)) continue;
    used_a.insert(e->a_id);
    used_b.insert(e->b_id);
    kept.push_back(e);
  }
  return kept;
}

double consistency(const MatchSet& matches, const KeyPointSet& denominator,
                   int threshold) {
  const bool is_a = denominator.source_id == matches.a_source;
  const bool is_b = denominator.source_id == matches.b_source;
  if (!is_a && !is_b)
    throw IdSetMismatch("set '" + denominator.source_id +
                        "' is not a side of this match set");
  if (denominator.points.empty())
    throw EmptyDenominator("key-point set '" + denominator.source_id + "' is empty");
  if (is_a && is_b && matches.a_source == matches.b_source)
    log::warn("both match sides share source '" + denominator.source_id +
              "'; counting the first side");

  std::set<std::string> matched;
  for (const MatchEdge* e : valid_edges(matches, threshold))
    matched.insert(is_a ? e->a_id : e->b_id);
  return 100.0 * static_cast<double>(matched.size()) /
         static_cast<double>(denominator.points.size());
}

}  // namespace reviewaudit::keypoint
