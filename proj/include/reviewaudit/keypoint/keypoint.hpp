#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace reviewaudit::keypoint {

// A review reduced to numbered points of criticism.
struct KeyPointSet {
  std::string source_id;  // which review these points came from
  std::vector<std::pair<std::string, std::string>> points;  // (id, text), ordered
};

// Serialized form: a JSON object {id: text}.
KeyPointSet keypoint_set_from_json(const std::string& json_text, std::string source_id);
nlohmann::ordered_json keypoint_set_json(const KeyPointSet& set);

// Model output -> KeyPointSet. Tolerates markdown code fences and prose
// around the JSON object; throws MalformedSummary when no object parses.
KeyPointSet parse_summary_response(const std::string& content, std::string source_id);

// Pair similarity is reported on a 5..10 scale; the offline matcher derives
// it from token overlap.
int score_from_jaccard(double jaccard);

struct MatchEdge {
  std::string a_id;
  std::string b_id;
  int score = 5;
  std::string explanation;
};

struct MatchSet {
  std::string a_source;
  std::string b_source;
  std::vector<MatchEdge> edges;  // all scored pairs, not yet thresholded
};

// Deterministic matcher scoring every pair by token overlap. The parallel
// entry point uses OpenMP when available; the serial one is the reference.
MatchSet offline_match(const KeyPointSet& a, const KeyPointSet& b);
MatchSet offline_match_serial(const KeyPointSet& a, const KeyPointSet& b);

// Model output -> MatchSet. Keys must be "aID-bID" with known ids; scores
// outside 5..10 are clamped with a warning. Throws MalformedMatch.
MatchSet parse_match_response(const std::string& content, const KeyPointSet& a,
                              const KeyPointSet& b);

// Serialized form: {"aID-bID": [score, explanation]}.
nlohmann::ordered_json match_set_json(const MatchSet& matches);

// Edges at or above the threshold, deduplicated one-to-one greedily
// (best score first; ties broken by id order). Pointers into `matches`.
std::vector<const MatchEdge*> valid_edges(const MatchSet& matches, int threshold);

// 100 x (matched points of `denominator`) / |denominator points|.
// The denominator set must be one of the two sides of `matches`.
double consistency(const MatchSet& matches, const KeyPointSet& denominator,
                   int threshold = 7);

}  // namespace reviewaudit::keypoint
