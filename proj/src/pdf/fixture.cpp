#include "reviewaudit/pdf/fixture.hpp"

#include <algorithm>
#include <cmath>

#include "reviewaudit/pdf/writer.hpp"

namespace reviewaudit::pdf {

namespace {

constexpr double kPageWidth = 612.0;
constexpr double kPageHeight = 792.0;
constexpr double kMargin = 72.0;
constexpr double kTop = kPageHeight - kMargin;
constexpr double kColumnGutter = 18.0;

std::vector<std::string> wrap_text(const std::string& text, double width, double size) {
  // Helvetica averages roughly half an em per glyph; good enough for layout.
  const auto max_chars = static_cast<std::size_t>(std::max(8.0, width / (0.5 * size)));
  std::vector<std::string> lines;
  std::string line;
  std::string word;
  auto flush_word = [&] {
    if (word.empty()) return;
    while (word.size() > max_chars) {  // pathological unbroken runs
      if (!line.empty()) {
        lines.push_back(line);
        line.clear();
      }
      lines.push_back(word.substr(0, max_chars));
      word.erase(0, max_chars);
    }
    if (line.empty()) {
      line = word;
    } else if (line.size() + 1 + word.size() <= max_chars) {
      line += " " + word;
    } else {
      lines.push_back(line);
      line = word;
    }
    word.clear();
  };
  for (const char c : text) {
    if (c == ' ' || c == '\t' || c == '\n') {
      flush_word();
    } else {
      word.push_back(c);
    }
  }
  flush_word();
  if (!line.empty()) lines.push_back(line);
  return lines;
}

class PageLayout {
public:
  explicit PageLayout(const FixtureDesc& desc) : desc_(desc) { begin_page(); }

  void title_block() {
    if (desc_.title.empty()) {
      column_top_ = y_;
      return;
    }
    for (const std::string& line : wrap_text(desc_.title, content_width(), desc_.title_size))
      put_line(line, "F2", desc_.title_size);
    y_ -= 0.6 * desc_.title_size;
    column_top_ = y_;
  }

  void section(const FixtureSection& s) {
    if (!s.heading.empty()) {
      y_ -= 0.5 * desc_.heading_size;
      for (const std::string& line :
           wrap_text(s.heading, column_width(), desc_.heading_size))
        put_line(line, "F2", desc_.heading_size);
    }
    for (const std::string& line : wrap_text(s.body, column_width(), desc_.body_size))
      put_line(line, "F1", desc_.body_size);
  }

  void caption(const std::string& text) {
    y_ -= 0.4 * desc_.caption_size;
    for (const std::string& line : wrap_text(text, column_width(), desc_.caption_size))
      put_line(line, "F1", desc_.caption_size);
  }

  std::vector<std::string> finish() {
    pages_.push_back(ops_);
    return std::move(pages_);
  }

private:
  double content_width() const { return kPageWidth - 2 * kMargin; }

  double column_width() const {
    return desc_.two_column ? (content_width() - kColumnGutter) / 2 : content_width();
  }

  double column_x() const {
    return desc_.two_column && column_ == 1 ? kMargin + column_width() + kColumnGutter
                                            : kMargin;
  }

  void begin_page() {
    ops_.clear();
    column_ = 0;
    y_ = kTop;
    column_top_ = kTop;
  }

  void advance_region() {
    if (desc_.two_column && column_ == 0) {
      column_ = 1;
      y_ = column_top_;
    } else {
      pages_.push_back(ops_);
      begin_page();
    }
  }

  void put_line(const std::string& text, const char* font, double size) {
    const double leading = 1.3 * size;
    if (y_ - leading < kMargin) advance_region();
    y_ -= leading;
    ops_ += "BT /";
    ops_ += font;
    ops_ += " " + serialize_object(Object{size}) + " Tf ";
    ops_ += "1 0 0 1 " + serialize_object(Object{column_x()}) + " " +
            serialize_object(Object{y_}) + " Tm ";
    ops_ += serialize_object(Object{text});
    ops_ += " Tj ET\n";
  }

  const FixtureDesc& desc_;
  std::vector<std::string> pages_;
  std::string ops_;
  int column_ = 0;
  double y_ = kTop;
  double column_top_ = kTop;
};

}  // namespace

Document build_fixture(const FixtureDesc& desc) {
  PageLayout layout(desc);
  layout.title_block();
  for (std::size_t i = 0; i < desc.sections.size(); ++i) {
    layout.section(desc.sections[i]);
    if (i < desc.captions.size()) layout.caption(desc.captions[i]);
  }
  const std::vector<std::string> page_ops = layout.finish();

  Document doc;
  Dict catalog;
  catalog.set("Type", Object{Name{"Catalog"}});
  catalog.set("Pages", Object{Ref{2, 0}});
  doc.objects[1] = Object{std::move(catalog)};

  auto make_font = [](const char* base) {
    Dict f;
    f.set("Type", Object{Name{"Font"}});
    f.set("Subtype", Object{Name{"Type1"}});
    f.set("BaseFont", Object{Name{base}});
    f.set("Encoding", Object{Name{"WinAnsiEncoding"}});
    return Object{std::move(f)};
  };
  doc.objects[3] = make_font("Helvetica");
  doc.objects[4] = make_font("Helvetica-Bold");

  Array kids;
  int next = 5;
  for (const std::string& ops : page_ops) {
    const int page_num = next++;
    const int content_num = next++;
    Dict page;
    page.set("Type", Object{Name{"Page"}});
    page.set("Parent", Object{Ref{2, 0}});
    page.set("Contents", Object{Ref{content_num, 0}});
    doc.objects[page_num] = Object{std::move(page)};

    Stream content;
    if (desc.compress_streams) {
      content.dict.set("Filter", Object{Name{"FlateDecode"}});
      content.raw = zlib_deflate(ops);
    } else {
      content.raw = ops;
    }
    doc.objects[content_num] = Object{std::move(content)};
    kids.emplace_back(Ref{page_num, 0});
  }

  Dict fonts;
  fonts.set("F1", Object{Ref{3, 0}});
  fonts.set("F2", Object{Ref{4, 0}});
  Dict resources;
  resources.set("Font", Object{std::move(fonts)});

  Dict pages;
  pages.set("Type", Object{Name{"Pages"}});
  pages.set("Count", Object{static_cast<double>(kids.size())});
  {
    Array media;
    media.emplace_back(0);
    media.emplace_back(0);
    media.emplace_back(kPageWidth);
    media.emplace_back(kPageHeight);
    pages.set("MediaBox", Object{std::move(media)});
  }
  pages.set("Resources", Object{std::move(resources)});
  pages.set("Kids", Object{std::move(kids)});
  doc.objects[2] = Object{std::move(pages)};

  doc.trailer.set("Root", Object{Ref{1, 0}});
  return doc;
}

std::string render_fixture(const FixtureDesc& desc) {
  return write_document(build_fixture(desc),
                        WriteOptions{desc.xref_stream, desc.pack_objects});
}

}  // namespace reviewaudit::pdf
