#include <algorithm>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/text.hpp"
#include "reviewaudit/review/review.hpp"
#include "reviewaudit/review/templates.hpp"

namespace reviewaudit::review {

const char* to_string(ContentMode mode) {
  switch (mode) {
    case ContentMode::Empty: return "empty";
    case ContentMode::TitleOnly: return "title-only";
    case ContentMode::TitleAbstractIntro: return "title-abstract-intro";
    case ContentMode::Full: return "full";
  }
  return "full";
}

ContentMode content_mode_from_string(const std::string& name) {
  if (name == "empty") return ContentMode::Empty;
  if (name == "title-only") return ContentMode::TitleOnly;
  if (name == "title-abstract-intro") return ContentMode::TitleAbstractIntro;
  if (name == "full") return ContentMode::Full;
  throw InvalidManifest("unknown content mode '" + name + "'");
}

const char* to_string(AuthorshipKind kind) {
  switch (kind) {
    case AuthorshipKind::DoubleBlind: return "double-blind";
    case AuthorshipKind::Original: return "original";
    case AuthorshipKind::TopUniversity: return "top-university";
    case AuthorshipKind::TopCompany: return "top-company";
    case AuthorshipKind::TuringLaureate: return "turing-laureate";
  }
  return "double-blind";
}

AuthorshipKind authorship_kind_from_string(const std::string& name) {
  if (name == "double-blind") return AuthorshipKind::DoubleBlind;
  if (name == "original") return AuthorshipKind::Original;
  if (name == "top-university") return AuthorshipKind::TopUniversity;
  if (name == "top-company") return AuthorshipKind::TopCompany;
  if (name == "turing-laureate") return AuthorshipKind::TuringLaureate;
  throw InvalidManifest("unknown authorship kind '" + name + "'");
}

const std::vector<std::string>& top_universities() {
  static const std::vector<std::string> list = {
      "MIT",
      "Carnegie Mellon University",
      "Stanford",
      "University of Oxford",
  };
  return list;
}

const std::vector<std::string>& top_companies() {
  static const std::vector<std::string> list = {
      "Google Research",
      "Microsoft Research",
      "Meta",
      "OpenAI",
  };
  return list;
}

const std::vector<std::string>& turing_laureates() {
  static const std::vector<std::string> list = {
      "Geoffrey Hinton",
      "Yoshua Bengio",
      "Yann LeCun",
  };
  return list;
}

namespace {

void require_listed(const std::string& name, const std::vector<std::string>& list,
                    const char* what) {
  if (std::find(list.begin(), list.end(), name) != list.end()) return;
  std::string allowed;
  for (const std::string& entry : list) {
    if (!allowed.empty()) allowed += ", ";
    allowed += entry;
  }
  throw OutOfRange("'" + name + "' is not a listed " + what + " (choose from: " + allowed +
                   ")");
}

}  // namespace

std::string authors_line(const AuthorshipProfile& profile) {
  switch (profile.kind) {
    case AuthorshipKind::DoubleBlind:
      return "Anonymous";
    case AuthorshipKind::Original:
      return profile.name.empty() ? "Anonymous" : profile.name;
    case AuthorshipKind::TopUniversity:
      require_listed(profile.name, top_universities(), "university");
      return "Researchers affiliated with " + profile.name;
    case AuthorshipKind::TopCompany:
      require_listed(profile.name, top_companies(), "company");
      return "Researchers affiliated with " + profile.name;
    case AuthorshipKind::TuringLaureate:
      require_listed(profile.name, turing_laureates(), "laureate");
      return profile.name;
  }
  return "Anonymous";
}

namespace {

std::string intro_text(const pdf::ParsedPaper& paper) {
  for (const pdf::PaperSection& s : paper.sections)
    if (text::contains_ci(s.heading, "introduction")) return s.body;
  // Fall back to the first substantial non-abstract section.
  for (const pdf::PaperSection& s : paper.sections) {
    if (text::contains_ci(s.heading, "abstract")) continue;
    if (!s.body.empty()) return s.body;
  }
  return {};
}

}  // namespace

std::string build_review_prompt(const pdf::ParsedPaper& paper, ContentMode mode,
                                const AuthorshipProfile& authors) {
  std::string title, abstract, main_text;
  switch (mode) {
    case ContentMode::Empty:
      break;
    case ContentMode::TitleOnly:
      title = paper.title;
      break;
    case ContentMode::TitleAbstractIntro:
      title = paper.title;
      abstract = paper.abstract_text;
      main_text = intro_text(paper);
      break;
    case ContentMode::Full:
      title = paper.title;
      abstract = paper.abstract_text;
      main_text = paper.main_text;
      break;
  }
  return render_template(structured_review_template(), {
                                                           {"title", title},
                                                           {"authors", authors_line(authors)},
                                                           {"abstract", abstract},
                                                           {"main_text", main_text},
                                                       });
}

}  // namespace reviewaudit::review
