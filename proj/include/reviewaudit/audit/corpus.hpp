#pragma once

#include <string>
#include <vector>

#include "reviewaudit/rater/record.hpp"

namespace reviewaudit::audit {

// Reads a papers.jsonl corpus: one JSON object per line, schema
// {paper_id, decision?, human_ratings, pdf_path?, review_texts?,
//  limitations_text?, clean_llm_rating?, manipulated_llm_rating?,
//  token_count?}. Relative pdf_path entries resolve against the corpus
// file's directory. Throws CorpusReadError listing every bad line.
std::vector<rater::PaperRecord> load_corpus(const std::string& path);

// Parses one corpus line; `where` prefixes error messages.
rater::PaperRecord parse_corpus_line(const std::string& line, const std::string& where);

// Serializes records back to the papers.jsonl schema (used by the fixture
// generator); optional fields are emitted only when set.
std::string corpus_jsonl(const std::vector<rater::PaperRecord>& records);

}  // namespace reviewaudit::audit
