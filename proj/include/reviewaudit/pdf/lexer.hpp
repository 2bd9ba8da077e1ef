#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/pdf/object.hpp"

namespace reviewaudit::pdf {

inline bool is_pdf_whitespace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\0';
}

inline bool is_pdf_delimiter(char c) {
  return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' ||
         c == '}' || c == '/' || c == '%';
}

// Token-level scanner over PDF syntax. Used for both the file body and
// content streams; the latter treats bare keywords as operators.
class Lexer {
public:
  explicit Lexer(std::string_view buf, std::size_t pos = 0) : buf_(buf), pos_(pos) {}

  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  bool eof() const { return pos_ >= buf_.size(); }
  std::string_view buffer() const { return buf_; }

  void skip_whitespace() {
    while (pos_ < buf_.size()) {
      const char c = buf_[pos_];
      if (is_pdf_whitespace(c)) {
        ++pos_;
      } else if (c == '%') {
        while (pos_ < buf_.size() && buf_[pos_] != '\n' && buf_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  char peek() const { return pos_ < buf_.size() ? buf_[pos_] : '\0'; }

  // Regular token: run of non-whitespace, non-delimiter bytes.
  std::string read_keyword() {
    skip_whitespace();
    std::size_t start = pos_;
    while (pos_ < buf_.size() && !is_pdf_whitespace(buf_[pos_]) && !is_pdf_delimiter(buf_[pos_]))
      ++pos_;
    return std::string(buf_.substr(start, pos_ - start));
  }

  bool try_keyword(std::string_view kw) {
    skip_whitespace();
    const std::size_t save = pos_;
    if (read_keyword() == kw) return true;
    pos_ = save;
    return false;
  }

  // One object: number, string, name, array, dict (or stream — handled by the
  // caller), ref, bool, null. Content-stream operators come back as Name-less
  // keywords via read_keyword(); parse_object is only called when the next
  // token cannot be an operator.
  Object parse_object();

  std::optional<double> try_number();

  std::string parse_literal_string();  // after '('
  std::string parse_hex_string();      // after '<'
  Name parse_name();                   // after '/'

private:
  Object parse_array();
  Object parse_dict_or_hex();

  std::string_view buf_;
  std::size_t pos_ = 0;
};

}  // namespace reviewaudit::pdf
