#include "reviewaudit/audit/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"
#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"
#include "reviewaudit/core/text.hpp"
#include "reviewaudit/rater/rating.hpp"

namespace reviewaudit::audit {

namespace {

using nlohmann::ordered_json;

int rating_in_range(const ordered_json& v, const std::string& where, const char* field) {
  if (!v.is_number_integer())
    throw CorpusReadError(where + ": " + field + " must be an integer");
  const auto r = v.get<long long>();
  if (r < 1 || r > 10)
    throw CorpusReadError(where + ": " + field + " " + std::to_string(r) +
                          " is outside [1, 10]");
  return static_cast<int>(r);
}

}  // namespace

rater::PaperRecord parse_corpus_line(const std::string& line, const std::string& where) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw CorpusReadError(where + ": not valid JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw CorpusReadError(where + ": line must be a JSON object");

  static const std::set<std::string> known = {
      "paper_id",      "decision",           "human_ratings",
      "pdf_path",      "review_texts",       "limitations_text",
      "clean_llm_rating", "manipulated_llm_rating", "token_count",
  };
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) log::warn(where + ": ignoring unknown field '" + key + "'");
  }

  rater::PaperRecord rec;
  if (!j.contains("paper_id") || !j.at("paper_id").is_string() ||
      j.at("paper_id").get<std::string>().empty())
    throw CorpusReadError(where + ": missing or empty 'paper_id'");
  rec.paper_id = j.at("paper_id").get<std::string>();

  if (!j.contains("human_ratings") || !j.at("human_ratings").is_array())
    throw CorpusReadError(where + ": 'human_ratings' must be an array");
  for (const auto& v : j.at("human_ratings"))
    rec.human_ratings.push_back(rating_in_range(v, where, "human rating"));

  if (j.contains("decision")) {
    if (!j.at("decision").is_string())
      throw CorpusReadError(where + ": 'decision' must be a string");
    rec.decision = rater::decision_from_string(j.at("decision").get<std::string>());
  }
  if (j.contains("pdf_path")) {
    if (!j.at("pdf_path").is_string())
      throw CorpusReadError(where + ": 'pdf_path' must be a string");
    rec.pdf_path = j.at("pdf_path").get<std::string>();
  }
  if (j.contains("review_texts")) {
    if (!j.at("review_texts").is_array())
      throw CorpusReadError(where + ": 'review_texts' must be an array of strings");
    for (const auto& v : j.at("review_texts")) {
      if (!v.is_string())
        throw CorpusReadError(where + ": 'review_texts' must be an array of strings");
      rec.review_texts.push_back(v.get<std::string>());
    }
  }
  if (j.contains("limitations_text")) {
    if (!j.at("limitations_text").is_string())
      throw CorpusReadError(where + ": 'limitations_text' must be a string");
    rec.limitations_text = j.at("limitations_text").get<std::string>();
  }
  if (j.contains("clean_llm_rating"))
    rec.clean_llm_rating = rating_in_range(j.at("clean_llm_rating"), where, "clean_llm_rating");
  if (j.contains("manipulated_llm_rating"))
    rec.manipulated_llm_rating =
        rating_in_range(j.at("manipulated_llm_rating"), where, "manipulated_llm_rating");
  if (j.contains("token_count")) {
    if (!j.at("token_count").is_number_integer() || j.at("token_count").get<long long>() < 0)
      throw CorpusReadError(where + ": 'token_count' must be a nonnegative integer");
    rec.token_count = j.at("token_count").get<long long>();
  }
  return rec;
}

std::vector<rater::PaperRecord> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusReadError("cannot open corpus file '" + path + "'");
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::vector<rater::PaperRecord> records;
  std::vector<std::string> problems;
  std::set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const std::string where = path + " line " + std::to_string(line_no);
    try {
      rater::PaperRecord rec = parse_corpus_line(line, where);
      if (!seen_ids.insert(rec.paper_id).second)
        throw CorpusReadError(where + ": duplicate paper_id '" + rec.paper_id + "'");
      if (!rec.pdf_path.empty() && std::filesystem::path(rec.pdf_path).is_relative())
        rec.pdf_path = (base / rec.pdf_path).string();
      records.push_back(std::move(rec));
    } catch (const CorpusReadError& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = std::to_string(problems.size()) + " bad corpus line(s):";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw CorpusReadError(msg);
  }
  if (records.empty()) log::warn("corpus '" + path + "' contains no records");
  return records;
}

std::string corpus_jsonl(const std::vector<rater::PaperRecord>& records) {
  std::string out;
  for (const rater::PaperRecord& rec : records) {
    ordered_json j;
    j["paper_id"] = rec.paper_id;
    if (rec.decision != rater::Decision::Unknown)
      j["decision"] = rater::to_string(rec.decision);
    j["human_ratings"] = rec.human_ratings;
    if (!rec.pdf_path.empty()) j["pdf_path"] = rec.pdf_path;
    if (!rec.review_texts.empty()) j["review_texts"] = rec.review_texts;
    if (!rec.limitations_text.empty()) j["limitations_text"] = rec.limitations_text;
    if (rec.clean_llm_rating) j["clean_llm_rating"] = *rec.clean_llm_rating;
    if (rec.manipulated_llm_rating)
      j["manipulated_llm_rating"] = *rec.manipulated_llm_rating;
    if (rec.token_count) j["token_count"] = *rec.token_count;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace reviewaudit::audit
