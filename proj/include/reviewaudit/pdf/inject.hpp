#pragma once

#include <array>
#include <string>
#include <string_view>

namespace reviewaudit::pdf {

struct InjectOptions {
  double font_size_pt = 1.0;
  std::array<double, 3> fill_rgb{1.0, 1.0, 1.0};
};

struct InjectResult {
  std::string pdf_bytes;
  int page_index = -1;        // page the payload landed on (0-based), -1 if none
  bool appended_page = false; // true when a fresh page had to be added
  std::size_t line_count = 0;
};

// Appends the payload as positioned text after the document's last visible
// line, using a style that renders invisibly at default options (1pt white).
// The payload must be Latin-1-representable UTF-8; newlines separate lines
// and no other control characters are allowed. An empty payload returns the
// input bytes unchanged. Original content streams are carried over verbatim.
InjectResult inject_payload(std::string_view pdf_bytes, const std::string& payload_utf8,
                            const InjectOptions& opts = {});

}  // namespace reviewaudit::pdf
