#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reviewaudit/pdf/document.hpp"

namespace reviewaudit::pdf {

struct DetectOptions {
  double min_visible_font_pt = 4.0;         // below this, flag TinyFont
  double max_background_similarity = 0.95;  // at or above, flag LowContrast
  std::array<double, 3> background_rgb{1.0, 1.0, 1.0};
  bool flag_offpage = true;
};

struct FlaggedSpan {
  int page_index = 0;
  std::string text;
  double font_size_pt = 0.0;
  std::array<double, 3> fill_color{0.0, 0.0, 0.0};
  std::vector<std::string> reasons;  // "TinyFont", "LowContrast", "OffPage"
};

struct DetectionReport {
  std::vector<FlaggedSpan> spans;  // ordered by (page_index, stream order)
  bool clean() const { return spans.empty(); }
};

DetectionReport detect_hidden_text(const Document& doc, const DetectOptions& opts = {});
DetectionReport detect_hidden_text(std::string_view pdf_bytes, const DetectOptions& opts = {});

// Similarity of a fill color to the page background, in [0, 1]; 1 means
// identical. Exposed for tests.
double background_similarity(const std::array<double, 3>& fill,
                             const std::array<double, 3>& background);

nlohmann::ordered_json detection_report_json(const DetectionReport& report);

}  // namespace reviewaudit::pdf
