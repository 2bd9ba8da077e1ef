#include "reviewaudit/pdf/paper.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"
#include "reviewaudit/core/text.hpp"
#include "reviewaudit/pdf/content.hpp"

namespace reviewaudit::pdf {

namespace {

struct Line {
  int page = 0;
  int column = 0;
  double x = 0, y = 0;
  double size = 0;
  bool bold = false;
  bool visible = true;
  std::string text;
};

double whiteness_distance(const std::array<double, 3>& rgb) {
  const double dr = rgb[0] - 1.0, dg = rgb[1] - 1.0, db = rgb[2] - 1.0;
  return std::sqrt(dr * dr + dg * dg + db * db) / std::sqrt(3.0);
}

bool span_visible(const TextSpan& s, double min_visible_font_pt) {
  if (s.font_size < min_visible_font_pt) return false;
  return whiteness_distance(s.fill_rgb) > 0.05;  // assumes a white page
}

std::vector<Line> assemble_lines(const Document& doc, const ParseOptions& opts) {
  const std::vector<int> pages = doc.page_numbers();
  std::vector<Line> lines;
  for (std::size_t pi = 0; pi < pages.size(); ++pi) {
    auto spans = extract_page_spans(doc, pages[pi], static_cast<int>(pi));
    std::stable_sort(spans.begin(), spans.end(), [](const TextSpan& a, const TextSpan& b) {
      if (a.y != b.y) return a.y > b.y;
      return a.x < b.x;
    });
    const auto box = doc.media_box(pages[pi]);
    const double mid = (box[0] + box[2]) / 2.0;
    std::vector<Line> page_lines;
    for (const TextSpan& s : spans) {
      if (s.text.empty()) continue;
      Line* match = nullptr;
      if (!page_lines.empty()) {
        Line& last = page_lines.back();
        if (std::abs(last.y - s.y) <= 0.3 * std::max(last.size, s.font_size)) match = &last;
      }
      if (match) {
        match->text += " " + s.text;
        match->size = std::max(match->size, s.font_size);
        match->bold = match->bold || s.bold;
        match->visible = match->visible || span_visible(s, opts.min_visible_font_pt);
        match->x = std::min(match->x, s.x);
      } else {
        Line l;
        l.page = static_cast<int>(pi);
        l.x = s.x;
        l.y = s.y;
        l.size = s.font_size;
        l.bold = s.bold;
        l.visible = span_visible(s, opts.min_visible_font_pt);
        l.text = s.text;
        page_lines.push_back(std::move(l));
      }
    }
    for (Line& l : page_lines) l.column = l.x >= mid ? 1 : 0;
    std::stable_sort(page_lines.begin(), page_lines.end(), [](const Line& a, const Line& b) {
      if (a.column != b.column) return a.column < b.column;
      if (a.y != b.y) return a.y > b.y;
      return a.x < b.x;
    });
    lines.insert(lines.end(), page_lines.begin(), page_lines.end());
  }
  return lines;
}

bool looks_numbered_heading(const std::string& text) {
  std::size_t i = 0;
  if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  while (i + 1 < text.size() && text[i] == '.' &&
         std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  }
  if (i < text.size() && text[i] == '.') ++i;
  if (i >= text.size() || text[i] != ' ') return false;
  while (i < text.size() && text[i] == ' ') ++i;
  return i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]));
}

bool looks_caption_start(const std::string& text) {
  static const char* prefixes[] = {"Figure", "Fig.", "Table"};
  for (const char* p : prefixes) {
    const std::size_t n = std::string(p).size();
    if (text.size() <= n || text.compare(0, n, p) != 0) continue;
    std::size_t i = n;
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      ++digits;
    }
    if (digits == 0) continue;
    while (i < text.size() && text[i] == ' ') ++i;
    if (i < text.size() && (text[i] == ':' || text[i] == '.')) return true;
  }
  return false;
}

}  // namespace

ParsedPaper parse_paper(const Document& doc, const ParseOptions& opts) {
  const std::vector<Line> lines = assemble_lines(doc, opts);
  ParsedPaper paper;

  // Title: the run of largest visible lines at the top of page one.
  std::vector<bool> is_title(lines.size(), false);
  {
    double max_size = 0;
    for (const Line& l : lines)
      if (l.page == 0 && l.visible) max_size = std::max(max_size, l.size);
    bool in_run = false;
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < lines.size() && lines[i].page == 0; ++i) {
      const Line& l = lines[i];
      const bool big = l.visible && l.size >= max_size - 0.5;
      if (big && (in_run || parts.empty())) {
        parts.push_back(l.text);
        is_title[i] = true;
        in_run = true;
      } else if (in_run) {
        break;
      }
    }
    std::string title;
    for (const std::string& p : parts) {
      if (!title.empty()) title += " ";
      title += p;
    }
    paper.title = title;
  }

  // Dominant body size: character-weighted mode over visible non-title text.
  double body_size = 10.0;
  {
    std::map<double, std::size_t> weight;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (is_title[i] || !lines[i].visible) continue;
      const double bucket = std::round(lines[i].size * 2.0) / 2.0;
      weight[bucket] += lines[i].text.size();
    }
    std::size_t best = 0;
    for (const auto& [bucket, w] : weight) {
      if (w > best) {
        best = w;
        body_size = bucket;
      }
    }
  }

  std::vector<PaperSection> sections;
  std::string front_matter;
  PaperSection current;
  bool have_heading = false;
  auto flush = [&] {
    if (have_heading) sections.push_back(current);
    current = PaperSection{};
  };
  // Wrapped lines are reflowed: a line that did not end its sentence is
  // glued to the next with a space, so extraction returns whole sentences
  // rather than visual-line fragments.
  auto append_body = [&](const std::string& text) {
    std::string& dst = have_heading ? current.body : front_matter;
    if (!dst.empty()) {
      const char last = dst.back();
      dst += (last == '.' || last == '!' || last == '?' || last == ':') ? '\n' : ' ';
    }
    dst += text;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_title[i]) continue;
    const Line& l = lines[i];
    if (!l.visible) {
      if (opts.include_hidden) append_body(l.text);
      continue;
    }
    if (l.size <= body_size - 0.75) continue;  // captions, footnotes, page furniture
    if (looks_caption_start(l.text) && l.size <= body_size + 0.25) continue;
    const bool sized_like_heading = l.size >= body_size + 1.5 ||
                                    (l.bold && l.size >= body_size - 0.25) ||
                                    looks_numbered_heading(l.text);
    if (sized_like_heading && l.text.size() < 100) {
      flush();
      current.heading = l.text;
      have_heading = true;
      continue;
    }
    append_body(l.text);
  }
  flush();

  if (sections.empty() && !front_matter.empty())
    sections.push_back(PaperSection{"", front_matter});
  paper.sections = std::move(sections);

  for (const PaperSection& s : paper.sections) {
    if (text::contains_ci(s.heading, "abstract")) {
      paper.abstract_text = s.body;
      break;
    }
  }
  std::string all;
  for (const PaperSection& s : paper.sections) {
    if (s.body.empty()) continue;
    if (!all.empty()) all += "\n";
    all += s.body;
  }
  paper.main_text = std::move(all);
  return paper;
}

std::string extract_section(const ParsedPaper& paper,
                            const std::vector<std::string>& heading_patterns) {
  for (const std::string& pattern : heading_patterns) {
    const PaperSection* first = nullptr;
    int matches = 0;
    for (const PaperSection& s : paper.sections) {
      if (text::contains_ci(s.heading, pattern)) {
        if (!first) first = &s;
        ++matches;
      }
    }
    if (first) {
      if (matches > 1)
        log::warn("multiple sections match '" + pattern + "'; using the first");
      return first->body;
    }
  }
  std::string joined;
  for (const std::string& p : heading_patterns) {
    if (!joined.empty()) joined += ", ";
    joined += "'" + p + "'";
  }
  throw SectionNotFound("no section heading matches " + joined);
}

std::vector<std::string> default_limitations_patterns() {
  return {"limitations and future work", "discussion of limitations", "limitations"};
}

}  // namespace reviewaudit::pdf
