#include "reviewaudit/pdf/lexer.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace reviewaudit::pdf {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::optional<double> Lexer::try_number() {
  skip_whitespace();
  const std::size_t save = pos_;
  std::size_t p = pos_;
  bool any_digit = false;
  if (p < buf_.size() && (buf_[p] == '+' || buf_[p] == '-')) ++p;
  while (p < buf_.size() && std::isdigit(static_cast<unsigned char>(buf_[p]))) {
    ++p;
    any_digit = true;
  }
  if (p < buf_.size() && buf_[p] == '.') {
    ++p;
    while (p < buf_.size() && std::isdigit(static_cast<unsigned char>(buf_[p]))) {
      ++p;
      any_digit = true;
    }
  }
  if (!any_digit) {
    pos_ = save;
    return std::nullopt;
  }
  // Must terminate at whitespace or a delimiter to be a number token.
  if (p < buf_.size() && !is_pdf_whitespace(buf_[p]) && !is_pdf_delimiter(buf_[p])) {
    pos_ = save;
    return std::nullopt;
  }
  const std::string tok(buf_.substr(pos_, p - pos_));
  pos_ = p;
  return std::strtod(tok.c_str(), nullptr);
}

std::string Lexer::parse_literal_string() {
  std::string out;
  int depth = 1;
  while (pos_ < buf_.size()) {
    char c = buf_[pos_++];
    if (c == '\\') {
      if (pos_ >= buf_.size()) break;
      char e = buf_[pos_++];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '(': out.push_back('('); break;
        case ')': out.push_back(')'); break;
        case '\\': out.push_back('\\'); break;
        case '\r':
          if (pos_ < buf_.size() && buf_[pos_] == '\n') ++pos_;
          break;  // line continuation
        case '\n': break;
        default:
          if (e >= '0' && e <= '7') {
            int v = e - '0';
            for (int i = 0; i < 2 && pos_ < buf_.size() && buf_[pos_] >= '0' && buf_[pos_] <= '7';
                 ++i)
              v = v * 8 + (buf_[pos_++] - '0');
            out.push_back(static_cast<char>(v & 0xFF));
          } else {
            out.push_back(e);  // unknown escape: PDF says drop the backslash
          }
      }
    } else if (c == '(') {
      ++depth;
      out.push_back(c);
    } else if (c == ')') {
      if (--depth == 0) return out;
      out.push_back(c);
    } else {
      out.push_back(c);
    }
  }
  throw MalformedPdf("unterminated literal string");
}

std::string Lexer::parse_hex_string() {
  std::string out;
  int hi = -1;
  while (pos_ < buf_.size()) {
    char c = buf_[pos_++];
    if (c == '>') {
      if (hi >= 0) out.push_back(static_cast<char>(hi << 4));
      return out;
    }
    const int v = hex_value(c);
    if (v < 0) continue;  // whitespace and junk between digits is allowed
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<char>((hi << 4) | v));
      hi = -1;
    }
  }
  throw MalformedPdf("unterminated hex string");
}

Name Lexer::parse_name() {
  std::string out;
  while (pos_ < buf_.size()) {
    char c = buf_[pos_];
    if (is_pdf_whitespace(c) || is_pdf_delimiter(c)) break;
    ++pos_;
    if (c == '#' && pos_ + 1 < buf_.size()) {
      const int h = hex_value(buf_[pos_]);
      const int l = hex_value(buf_[pos_ + 1]);
      if (h >= 0 && l >= 0) {
        out.push_back(static_cast<char>((h << 4) | l));
        pos_ += 2;
        continue;
      }
    }
    out.push_back(c);
  }
  return Name{out};
}

Object Lexer::parse_array() {
  Array arr;
  while (true) {
    skip_whitespace();
    if (eof()) throw MalformedPdf("unterminated array");
    if (peek() == ']') {
      ++pos_;
      return Object{std::move(arr)};
    }
    arr.push_back(parse_object());
  }
}

Object Lexer::parse_dict_or_hex() {
  // Caller consumed first '<'.
  if (pos_ < buf_.size() && buf_[pos_] == '<') {
    ++pos_;
    Dict d;
    while (true) {
      skip_whitespace();
      if (eof()) throw MalformedPdf("unterminated dictionary");
      if (peek() == '>') {
        ++pos_;
        if (pos_ < buf_.size() && buf_[pos_] == '>') {
          ++pos_;
          return Object{std::move(d)};
        }
        throw MalformedPdf("expected '>>' closing dictionary");
      }
      if (peek() != '/') throw MalformedPdf("dictionary key is not a name");
      ++pos_;
      Name key = parse_name();
      Object value = parse_object();
      d.set(key.value, std::move(value));
    }
  }
  return Object{parse_hex_string()};
}

Object Lexer::parse_object() {
  skip_whitespace();
  if (eof()) throw MalformedPdf("unexpected end of data");
  const char c = peek();
  if (c == '/') {
    ++pos_;
    return Object{parse_name()};
  }
  if (c == '(') {
    ++pos_;
    return Object{parse_literal_string()};
  }
  if (c == '<') {
    ++pos_;
    return parse_dict_or_hex();
  }
  if (c == '[') {
    ++pos_;
    return parse_array();
  }
  if (c == ']' || c == '>' || c == ')' || c == '{' || c == '}') {
    throw MalformedPdf(std::string("unexpected delimiter '") + c + "'");
  }
  // Number, possibly the start of an indirect reference "N G R".
  if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.') {
    const std::size_t save = pos_;
    auto num = try_number();
    if (!num) throw MalformedPdf("malformed number");
    if (*num >= 0 && *num == static_cast<double>(static_cast<long long>(*num))) {
      const std::size_t after_first = pos_;
      auto gen = try_number();
      if (gen && *gen >= 0 && *gen == static_cast<double>(static_cast<long long>(*gen))) {
        const std::size_t after_second = pos_;
        if (try_keyword("R"))
          return Object{Ref{static_cast<int>(*num), static_cast<int>(*gen)}};
        pos_ = after_second;
      }
      pos_ = after_first;
      (void)save;
    }
    return Object{*num};
  }
  const std::string kw = read_keyword();
  if (kw == "true") return Object{true};
  if (kw == "false") return Object{false};
  if (kw == "null") return Object{};
  throw MalformedPdf("unexpected token '" + kw + "'");
}

}  // namespace reviewaudit::pdf
