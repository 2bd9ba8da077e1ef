#include "reviewaudit/pdf/detect.hpp"

#include <cmath>

#include "reviewaudit/pdf/content.hpp"
#include "reviewaudit/pdf/reader.hpp"

namespace reviewaudit::pdf {

double background_similarity(const std::array<double, 3>& fill,
                             const std::array<double, 3>& background) {
  const double dr = fill[0] - background[0];
  const double dg = fill[1] - background[1];
  const double db = fill[2] - background[2];
  return 1.0 - std::sqrt(dr * dr + dg * dg + db * db) / std::sqrt(3.0);
}

DetectionReport detect_hidden_text(const Document& doc, const DetectOptions& opts) {
  DetectionReport report;
  const std::vector<int> pages = doc.page_numbers();
  for (std::size_t pi = 0; pi < pages.size(); ++pi) {
    const auto box = doc.media_box(pages[pi]);
    for (const TextSpan& s : extract_page_spans(doc, pages[pi], static_cast<int>(pi))) {
      std::vector<std::string> reasons;
      if (s.font_size < opts.min_visible_font_pt) reasons.emplace_back("TinyFont");
      if (background_similarity(s.fill_rgb, opts.background_rgb) >=
          opts.max_background_similarity)
        reasons.emplace_back("LowContrast");
      if (opts.flag_offpage &&
          (s.x < box[0] || s.x > box[2] || s.y < box[1] || s.y > box[3]))
        reasons.emplace_back("OffPage");
      if (reasons.empty()) continue;
      FlaggedSpan f;
      f.page_index = static_cast<int>(pi);
      f.text = s.text;
      f.font_size_pt = s.font_size;
      f.fill_color = s.fill_rgb;
      f.reasons = std::move(reasons);
      report.spans.push_back(std::move(f));
    }
  }
  return report;
}

DetectionReport detect_hidden_text(std::string_view pdf_bytes, const DetectOptions& opts) {
  return detect_hidden_text(read_document(pdf_bytes), opts);
}

nlohmann::ordered_json detection_report_json(const DetectionReport& report) {
  nlohmann::ordered_json spans = nlohmann::ordered_json::array();
  for (const FlaggedSpan& s : report.spans) {
    nlohmann::ordered_json span;
    span["page_index"] = s.page_index;
    span["text"] = s.text;
    span["font_size_pt"] = s.font_size_pt;
    span["fill_color"] = s.fill_color;
    span["reasons"] = s.reasons;
    spans.push_back(std::move(span));
  }
  nlohmann::ordered_json out;
  out["spans"] = std::move(spans);
  return out;
}

}  // namespace reviewaudit::pdf
