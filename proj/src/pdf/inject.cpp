#include "reviewaudit/pdf/inject.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"
#include "reviewaudit/pdf/content.hpp"
#include "reviewaudit/pdf/reader.hpp"
#include "reviewaudit/pdf/writer.hpp"

namespace reviewaudit::pdf {

namespace {

constexpr double kBottomMargin = 36.0;

std::vector<std::string> validate_payload(const std::string& payload_utf8) {
  std::string latin1;
  if (!utf8_to_latin1(payload_utf8, latin1))
    throw PayloadEncodingError("payload contains characters outside Latin-1");
  for (const char c : latin1) {
    const auto u = static_cast<unsigned char>(c);
    if ((u < 0x20 && c != '\n') || u == 0x7F)
      throw PayloadEncodingError("payload contains control characters");
  }
  if (latin1.front() == '\n' || latin1.back() == '\n' ||
      latin1.find("\n\n") != std::string::npos)
    throw PayloadEncodingError("payload has leading, trailing, or doubled newlines");
  std::vector<std::string> lines;
  std::string cur;
  for (const char c : latin1) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  lines.push_back(cur);
  return lines;
}

// Clones the page's effective resources and registers a fresh Type1 font,
// returning the resource name to use with Tf. Shared resource objects are
// left untouched; only the clone references the new font.
std::string add_payload_font(Document& doc, Dict& page) {
  Dict resources;
  if (const Object* own = doc.resolve(page.find("Resources")); own && own->is_dict()) {
    resources = own->dict();
  } else {
    // Inherited resources: locate this page dict inside the document to walk
    // its /Parent chain. Appended pages are not registered yet and start
    // with an empty resource dictionary, which is fine — they only ever use
    // the payload font.
    for (const auto& [num, obj] : doc.objects) {
      if (obj.is_dict() && &obj.dict() == &page) {
        if (const Dict* inherited = doc.resources(num)) resources = *inherited;
        break;
      }
    }
  }

  Dict fonts;
  if (const Object* f = resources.find("Font")) {
    const Object* resolved = doc.resolve(f);
    if (resolved && resolved->is_dict()) fonts = resolved->dict();
  }
  std::string name;
  for (int i = 1;; ++i) {
    name = "IF" + std::to_string(i);
    if (!fonts.has(name)) break;
  }
  Dict font;
  font.set("Type", Object{Name{"Font"}});
  font.set("Subtype", Object{Name{"Type1"}});
  font.set("BaseFont", Object{Name{"Helvetica"}});
  font.set("Encoding", Object{Name{"WinAnsiEncoding"}});
  const int font_num = doc.add(Object{std::move(font)});
  fonts.set(name, Object{Ref{font_num, 0}});
  resources.set("Font", Object{std::move(fonts)});
  page.set("Resources", Object{std::move(resources)});
  return name;
}

std::string payload_ops(const std::vector<std::string>& lines, const std::string& font_name,
                        const InjectOptions& opts, double x, double y_start) {
  const double leading = std::max(1.0, 1.2 * opts.font_size_pt);
  std::string ops = "q\n";
  double y = y_start;
  for (const std::string& line : lines) {
    ops += "BT /" + font_name + " " + serialize_object(Object{opts.font_size_pt}) + " Tf ";
    ops += serialize_object(Object{opts.fill_rgb[0]}) + " " +
           serialize_object(Object{opts.fill_rgb[1]}) + " " +
           serialize_object(Object{opts.fill_rgb[2]}) + " rg ";
    ops += "1 0 0 1 " + serialize_object(Object{x}) + " " + serialize_object(Object{y}) +
           " Tm ";
    // Lines arrive as Latin-1 bytes already; spans decode back to UTF-8.
    ops += serialize_object(Object{line});
    ops += " Tj ET\n";
    y -= leading;
  }
  ops += "Q\n";
  return ops;
}

void attach_content(Document& doc, Dict& page, int stream_num) {
  Object* contents = page.find("Contents");
  if (!contents) {
    page.set("Contents", Object{Ref{stream_num, 0}});
    return;
  }
  if (contents->is_ref()) {
    Array arr;
    arr.push_back(*contents);
    arr.emplace_back(Ref{stream_num, 0});
    *contents = Object{std::move(arr)};
    return;
  }
  const Object* resolved = doc.resolve(contents);
  if (resolved && resolved->is_array()) {
    Array arr = resolved->array();
    arr.emplace_back(Ref{stream_num, 0});
    *contents = Object{std::move(arr)};
    return;
  }
  page.set("Contents", Object{Ref{stream_num, 0}});
}

}  // namespace

InjectResult inject_payload(std::string_view pdf_bytes, const std::string& payload_utf8,
                            const InjectOptions& opts) {
  if (payload_utf8.empty()) {
    InjectResult r;
    r.pdf_bytes = std::string(pdf_bytes);
    return r;
  }
  const std::vector<std::string> lines = validate_payload(payload_utf8);

  const double whiteness = [&] {
    const double dr = opts.fill_rgb[0] - 1.0, dg = opts.fill_rgb[1] - 1.0,
                 db = opts.fill_rgb[2] - 1.0;
    return std::sqrt(dr * dr + dg * dg + db * db) / std::sqrt(3.0);
  }();
  if (opts.font_size_pt >= 4.0 || whiteness > 0.05)
    log::warn("payload style is likely visible (size " +
              std::to_string(opts.font_size_pt) + "pt)");

  Document doc = read_document(pdf_bytes);
  const std::vector<int> pages = doc.page_numbers();
  if (pages.empty()) throw MalformedPdf("document has no pages");

  // Target the last page that shows any text; fall back to the last page.
  int target_index = static_cast<int>(pages.size()) - 1;
  double low_y = 0, low_size = 0;
  bool found_text = false;
  for (int pi = static_cast<int>(pages.size()) - 1; pi >= 0; --pi) {
    const auto spans = extract_page_spans(doc, pages[pi], pi);
    if (spans.empty()) continue;
    target_index = pi;
    low_y = spans[0].y;
    low_size = spans[0].font_size;
    for (const TextSpan& s : spans) {
      if (s.y < low_y) {
        low_y = s.y;
        low_size = s.font_size;
      }
    }
    found_text = true;
    break;
  }

  const double leading = std::max(1.0, 1.2 * opts.font_size_pt);
  const double needed = static_cast<double>(lines.size()) * leading;
  const auto box = doc.media_box(pages[target_index]);

  double x, y_start;
  bool append = false;
  if (!found_text) {
    x = box[0] + 72.0;
    y_start = box[3] - 72.0;
    if (y_start - needed < box[1] + kBottomMargin) append = true;
  } else {
    // Start just right of the page midline: text extractors that read
    // multi-column pages left column first then reach the payload after
    // every column, so it lands at the very end of the extracted text.
    x = (box[0] + box[2]) / 2.0 + 1.0;
    // Clear the anchor line by more than any plausible line-grouping
    // tolerance so the payload never fuses with visible text.
    y_start = low_y - std::max({2.0, leading, 0.5 * low_size + 1.0});
    if (y_start - needed < box[1] + kBottomMargin) append = true;
  }

  InjectResult result;
  result.line_count = lines.size();

  if (!append) {
    Object* page_obj = const_cast<Object*>(doc.get(pages[target_index]));
    Dict& page = page_obj->dict();
    const std::string font_name = add_payload_font(doc, page);
    Stream s;
    s.raw = payload_ops(lines, font_name, opts, x, y_start);
    const int stream_num = doc.add(Object{std::move(s)});
    attach_content(doc, page, stream_num);
    result.page_index = target_index;
  } else {
    // Not enough room below the last line: put the payload on a new page.
    const Object* root = doc.resolve_key(doc.trailer, "Root");
    const Object* pages_ref = root->dict().find("Pages");
    if (!pages_ref || !pages_ref->is_ref())
      throw MalformedPdf("page tree root is not an indirect reference");
    const int pages_num = pages_ref->ref().num;

    Dict page;
    page.set("Type", Object{Name{"Page"}});
    page.set("Parent", Object{Ref{pages_num, 0}});
    {
      Array media;
      for (const double v : box) media.emplace_back(v);
      page.set("MediaBox", Object{std::move(media)});
    }
    const std::string font_name = add_payload_font(doc, page);
    Stream s;
    s.raw = payload_ops(lines, font_name, opts, box[0] + 72.0, box[3] - 72.0);
    const int stream_num = doc.add(Object{std::move(s)});
    page.set("Contents", Object{Ref{stream_num, 0}});
    const int page_num = doc.add(Object{std::move(page)});

    Object* pages_obj = const_cast<Object*>(doc.get(pages_num));
    if (!pages_obj || !pages_obj->is_dict())
      throw MalformedPdf("page tree root object missing");
    Dict& pages_dict = pages_obj->dict();
    Object* kids = pages_dict.find("Kids");
    if (!kids || !kids->is_array()) throw MalformedPdf("page tree root has no /Kids");
    kids->array().emplace_back(Ref{page_num, 0});
    const Object* count = doc.resolve_key(pages_dict, "Count");
    const long long old_count = count && count->is_number() ? count->integer() : 0;
    pages_dict.set("Count", Object{static_cast<double>(old_count + 1)});

    result.page_index = static_cast<int>(pages.size());
    result.appended_page = true;
  }

  result.pdf_bytes = write_document(doc);
  return result;
}

}  // namespace reviewaudit::pdf
