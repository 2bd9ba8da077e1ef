#pragma once

#include <string>
#include <vector>

#include "reviewaudit/pdf/document.hpp"

namespace reviewaudit::pdf {

struct PaperSection {
  std::string heading;
  std::string body;  // lines joined with '\n'
};

// Heuristic reconstruction of a paper from positioned text: title, sections
// in reading order, and the concatenated body text that a text extractor
// would hand to a language model.
struct ParsedPaper {
  std::string title;
  std::string abstract_text;
  std::vector<PaperSection> sections;
  std::string main_text;  // all section bodies joined with '\n'
};

struct ParseOptions {
  // Text extractors feed invisible content to downstream consumers; that is
  // the behavior audited here, so hidden text is kept by default. Set false
  // to approximate what a human reader sees.
  bool include_hidden = true;
  double min_visible_font_pt = 4.0;
};

ParsedPaper parse_paper(const Document& doc, const ParseOptions& opts = {});

// Body of the first section whose heading contains any of the given
// patterns (case-insensitive substring), tried in order. Throws
// SectionNotFound when nothing matches; warns when several headings match.
std::string extract_section(const ParsedPaper& paper,
                            const std::vector<std::string>& heading_patterns);

// Patterns for locating a limitations discussion.
std::vector<std::string> default_limitations_patterns();

}  // namespace reviewaudit::pdf
