#include "reviewaudit/pdf/content.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "reviewaudit/core/text.hpp"
#include "reviewaudit/pdf/lexer.hpp"

namespace reviewaudit::pdf {

namespace {

// Row-vector convention: [a b 0; c d 0; e f 1], point' = point * M.
struct Matrix {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  static Matrix identity() { return {}; }
  static Matrix translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }

  Matrix mul(const Matrix& m) const {
    return {a * m.a + b * m.c,         a * m.b + b * m.d,
            c * m.a + d * m.c,         c * m.b + d * m.d,
            e * m.a + f * m.c + m.e,   e * m.b + f * m.d + m.f};
  }

  double scale() const { return std::sqrt(std::abs(a * d - b * c)); }
};

struct GraphicsState {
  Matrix ctm = Matrix::identity();
  std::array<double, 3> fill_rgb{0.0, 0.0, 0.0};
  std::string font;
  double font_size = 0.0;
  bool bold = false;
};

bool font_is_bold(const Document& doc, const Dict* resources, const std::string& font_name) {
  if (!resources) return false;
  const Object* fonts = doc.resolve_key(*resources, "Font");
  if (!fonts || !fonts->is_dict()) return false;
  const Object* font = doc.resolve_key(fonts->dict(), font_name);
  if (!font || !font->is_dict()) return false;
  const Object* base = doc.resolve_key(font->dict(), "BaseFont");
  if (!base || !base->is_name()) return false;
  return text::contains_ci(base->name(), "bold");
}

class Interpreter {
public:
  Interpreter(const Document& doc, const Dict* resources, int page_index,
              std::vector<TextSpan>& out)
      : doc_(doc), resources_(resources), page_index_(page_index), out_(out) {}

  void run(const std::string& content) {
    Lexer lex(content);
    std::vector<Object> operands;
    while (true) {
      lex.skip_whitespace();
      if (lex.eof()) break;
      const char ch = lex.peek();
      const bool operand_start = ch == '/' || ch == '(' || ch == '<' || ch == '[' ||
                                 ch == '.' || ch == '+' || ch == '-' ||
                                 std::isdigit(static_cast<unsigned char>(ch));
      if (operand_start) {
        try {
          operands.push_back(lex.parse_object());
        } catch (const Error&) {
          break;  // corrupt tail; keep what we have
        }
        continue;
      }
      const std::string op = lex.read_keyword();
      if (op.empty()) break;
      if (op == "BI") {
        skip_inline_image(lex);
        operands.clear();
        continue;
      }
      apply(op, operands);
      operands.clear();
    }
  }

private:
  static void skip_inline_image(Lexer& lex) {
    const std::string_view buf = lex.buffer();
    std::size_t p = buf.find("EI", lex.pos());
    lex.seek(p == std::string_view::npos ? buf.size() : p + 2);
  }

  static double num_at(const std::vector<Object>& ops, std::size_t i) {
    return i < ops.size() && ops[i].is_number() ? ops[i].number() : 0.0;
  }

  void set_fill(const std::vector<Object>& ops) {
    std::vector<double> comps;
    for (const Object& o : ops)
      if (o.is_number()) comps.push_back(o.number());
    if (comps.size() == 1) {
      state_.fill_rgb = {comps[0], comps[0], comps[0]};
    } else if (comps.size() == 3) {
      state_.fill_rgb = {comps[0], comps[1], comps[2]};
    } else if (comps.size() == 4) {
      const double k = comps[3];
      state_.fill_rgb = {(1 - comps[0]) * (1 - k), (1 - comps[1]) * (1 - k),
                         (1 - comps[2]) * (1 - k)};
    }
  }

  void show_text(const std::string& bytes) {
    const Matrix m = tm_.mul(state_.ctm);
    TextSpan span;
    span.page_index = page_index_;
    span.x = m.e;
    span.y = m.f;
    span.font_size = state_.font_size * m.scale();
    span.fill_rgb = state_.fill_rgb;
    span.font = state_.font;
    span.bold = state_.bold;
    span.text = latin1_to_utf8(bytes);
    // Consecutive shows without repositioning belong to the same line.
    if (!out_.empty() && !moved_since_emit_ && out_.back().page_index == page_index_) {
      out_.back().text += span.text;
    } else {
      out_.push_back(std::move(span));
    }
    moved_since_emit_ = false;
  }

  void show_tj_array(const Object& arr) {
    std::string bytes;
    for (const Object& part : arr.array())
      if (part.is_string()) bytes += part.string();
    if (!bytes.empty()) show_text(bytes);
  }

  void apply(const std::string& op, const std::vector<Object>& ops) {
    if (op == "q") {
      stack_.push_back(state_);
    } else if (op == "Q") {
      if (!stack_.empty()) {
        state_ = stack_.back();
        stack_.pop_back();
      }
    } else if (op == "cm") {
      const Matrix m{num_at(ops, 0), num_at(ops, 1), num_at(ops, 2),
                     num_at(ops, 3), num_at(ops, 4), num_at(ops, 5)};
      state_.ctm = m.mul(state_.ctm);
    } else if (op == "BT") {
      tm_ = Matrix::identity();
      tlm_ = Matrix::identity();
      moved_since_emit_ = true;
    } else if (op == "ET") {
      moved_since_emit_ = true;
    } else if (op == "Tf") {
      if (!ops.empty() && ops[0].is_name()) {
        state_.font = ops[0].name();
        state_.bold = font_is_bold(doc_, resources_, state_.font);
      }
      state_.font_size = num_at(ops, 1);
    } else if (op == "TL") {
      leading_ = num_at(ops, 0);
    } else if (op == "Td") {
      tlm_ = Matrix::translate(num_at(ops, 0), num_at(ops, 1)).mul(tlm_);
      tm_ = tlm_;
      moved_since_emit_ = true;
    } else if (op == "TD") {
      leading_ = -num_at(ops, 1);
      tlm_ = Matrix::translate(num_at(ops, 0), num_at(ops, 1)).mul(tlm_);
      tm_ = tlm_;
      moved_since_emit_ = true;
    } else if (op == "Tm") {
      tlm_ = Matrix{num_at(ops, 0), num_at(ops, 1), num_at(ops, 2),
                    num_at(ops, 3), num_at(ops, 4), num_at(ops, 5)};
      tm_ = tlm_;
      moved_since_emit_ = true;
    } else if (op == "T*") {
      tlm_ = Matrix::translate(0, -leading_).mul(tlm_);
      tm_ = tlm_;
      moved_since_emit_ = true;
    } else if (op == "Tj") {
      if (!ops.empty() && ops[0].is_string()) show_text(ops[0].string());
    } else if (op == "TJ") {
      if (!ops.empty() && ops[0].is_array()) show_tj_array(ops[0]);
    } else if (op == "'") {
      tlm_ = Matrix::translate(0, -leading_).mul(tlm_);
      tm_ = tlm_;
      moved_since_emit_ = true;
      if (!ops.empty() && ops[0].is_string()) show_text(ops[0].string());
    } else if (op == "\"") {
      tlm_ = Matrix::translate(0, -leading_).mul(tlm_);
      tm_ = tlm_;
      moved_since_emit_ = true;
      if (ops.size() >= 3 && ops[2].is_string()) show_text(ops[2].string());
    } else if (op == "g" || op == "rg" || op == "k" || op == "sc" || op == "scn") {
      set_fill(ops);
    }
    // Stroke colors, clipping, paths, XObjects: irrelevant to text audit.
  }

  const Document& doc_;
  const Dict* resources_;
  int page_index_;
  std::vector<TextSpan>& out_;

  GraphicsState state_;
  std::vector<GraphicsState> stack_;
  Matrix tm_ = Matrix::identity();
  Matrix tlm_ = Matrix::identity();
  double leading_ = 0.0;
  bool moved_since_emit_ = true;
};

}  // namespace

std::vector<TextSpan> extract_page_spans(const Document& doc, int page_num, int page_index) {
  std::vector<TextSpan> out;
  Interpreter interp(doc, doc.resources(page_num), page_index, out);
  interp.run(doc.page_content(page_num));
  return out;
}

std::vector<TextSpan> extract_spans(const Document& doc) {
  std::vector<TextSpan> out;
  const std::vector<int> pages = doc.page_numbers();
  for (std::size_t i = 0; i < pages.size(); ++i) {
    auto spans = extract_page_spans(doc, pages[i], static_cast<int>(i));
    out.insert(out.end(), spans.begin(), spans.end());
  }
  return out;
}

std::string latin1_to_utf8(const std::string& bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (const char c : bytes) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80) {
      out.push_back(c);
    } else {
      out.push_back(static_cast<char>(0xC0 | (u >> 6)));
      out.push_back(static_cast<char>(0x80 | (u & 0x3F)));
    }
  }
  return out;
}

bool utf8_to_latin1(const std::string& utf8, std::string& out) {
  out.clear();
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size();) {
    const auto u = static_cast<unsigned char>(utf8[i]);
    if (u < 0x80) {
      out.push_back(static_cast<char>(u));
      ++i;
    } else if ((u & 0xE0) == 0xC0 && i + 1 < utf8.size()) {
      const auto u2 = static_cast<unsigned char>(utf8[i + 1]);
      if ((u2 & 0xC0) != 0x80) return false;
      const unsigned cp = (static_cast<unsigned>(u & 0x1F) << 6) | (u2 & 0x3F);
      if (cp > 0xFF) return false;
      out.push_back(static_cast<char>(cp));
      i += 2;
    } else {
      return false;  // 3+ byte sequences are outside Latin-1
    }
  }
  return true;
}

}  // namespace reviewaudit::pdf
