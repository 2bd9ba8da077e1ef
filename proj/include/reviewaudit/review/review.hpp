#pragma once

#include <string>
#include <vector>

#include "reviewaudit/llm/client.hpp"
#include "reviewaudit/pdf/paper.hpp"

namespace reviewaudit::review {

// How much of the paper the prompt exposes. Used to probe how ratings react
// when the reviewer sees less and less of the submission.
enum class ContentMode { Empty, TitleOnly, TitleAbstractIntro, Full };

const char* to_string(ContentMode mode);
ContentMode content_mode_from_string(const std::string& name);  // throws InvalidManifest

// Claimed authorship shown to the reviewer. The non-original kinds draw
// from fixed lists so probe conditions stay comparable across runs.
enum class AuthorshipKind { DoubleBlind, Original, TopUniversity, TopCompany, TuringLaureate };

struct AuthorshipProfile {
  AuthorshipKind kind = AuthorshipKind::DoubleBlind;
  std::string name;  // entry from the matching list; free text for Original
};

const char* to_string(AuthorshipKind kind);
AuthorshipKind authorship_kind_from_string(const std::string& name);

const std::vector<std::string>& top_universities();
const std::vector<std::string>& top_companies();
const std::vector<std::string>& turing_laureates();

// Renders the Authors slot. Throws OutOfRange when a listed kind names
// something outside its list.
std::string authors_line(const AuthorshipProfile& profile);

struct StructuredReview {
  std::string significance;
  std::string reasons_accept;
  std::string reasons_reject;
  std::string suggestions;
  std::string raw;  // untouched model output
};

std::string build_review_prompt(const pdf::ParsedPaper& paper, ContentMode mode,
                                const AuthorshipProfile& authors);

// Splits model output on the four section headings (case-insensitive,
// tolerant of markdown decoration). Throws MalformedReview when no heading
// is found; warns when only some are.
StructuredReview parse_review_response(const std::string& content);

StructuredReview generate_review(llm::Client& client, const std::string& model,
                                 const pdf::ParsedPaper& paper, ContentMode mode,
                                 const AuthorshipProfile& authors, int max_tokens = 1024);

}  // namespace reviewaudit::review
