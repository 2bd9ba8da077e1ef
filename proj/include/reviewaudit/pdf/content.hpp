#pragma once

#include <array>
#include <string>
#include <vector>

#include "reviewaudit/pdf/document.hpp"

namespace reviewaudit::pdf {

// One text-showing operation, positioned on the page. Coordinates are the
// text origin after applying the text and transformation matrices; font_size
// is the effective rendered size (Tf size scaled by those matrices).
struct TextSpan {
  int page_index = 0;  // 0-based index into the document's page sequence
  double x = 0.0;
  double y = 0.0;
  double font_size = 0.0;
  std::array<double, 3> fill_rgb{0.0, 0.0, 0.0};
  std::string font;  // resource name as used by Tf, without the slash
  bool bold = false;
  std::string text;  // UTF-8 (bytes >= 0x80 are treated as Latin-1)
};

// Runs the content stream of every page and collects text spans in stream
// order. Unsupported operators are ignored.
std::vector<TextSpan> extract_spans(const Document& doc);

// Single page variant; page_index is recorded into the spans.
std::vector<TextSpan> extract_page_spans(const Document& doc, int page_num, int page_index);

// Latin-1 bytes -> UTF-8 and back. to_latin1 returns false on code points
// outside U+0000..U+00FF or malformed UTF-8.
std::string latin1_to_utf8(const std::string& bytes);
bool utf8_to_latin1(const std::string& utf8, std::string& out);

}  // namespace reviewaudit::pdf
