#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace reviewaudit::pdf {

struct Object;

// Name without the leading slash, e.g. "Type".
struct Name {
  std::string value;
  friend bool operator==(const Name& a, const Name& b) { return a.value == b.value; }
};

// Indirect reference "num gen R".
struct Ref {
  int num = 0;
  int gen = 0;
  friend bool operator==(const Ref& a, const Ref& b) { return a.num == b.num && a.gen == b.gen; }
};

// Order-preserving dictionary; PDF consumers don't care about key order but
// keeping it makes rewritten files minimally diff against their source.
struct Dict {
  std::vector<std::pair<std::string, Object>> items;

  const Object* find(const std::string& key) const;
  Object* find(const std::string& key);
  bool has(const std::string& key) const { return find(key) != nullptr; }
  void set(const std::string& key, Object value);
  void erase(const std::string& key);
};

struct Stream {
  Dict dict;
  std::string raw;  // encoded bytes exactly as stored in the file
};

using Array = std::vector<Object>;

struct Object {
  std::variant<std::monostate, bool, double, std::string, Name, Array, Dict, Stream, Ref> value;

  Object() = default;
  Object(std::monostate) : value(std::monostate{}) {}
  Object(bool b) : value(b) {}
  Object(double d) : value(d) {}
  Object(int i) : value(static_cast<double>(i)) {}
  Object(std::string s) : value(std::move(s)) {}
  Object(const char* s) : value(std::string(s)) {}
  Object(Name n) : value(std::move(n)) {}
  Object(Array a) : value(std::move(a)) {}
  Object(Dict d) : value(std::move(d)) {}
  Object(Stream s) : value(std::move(s)) {}
  Object(Ref r) : value(r) {}

  bool is_null() const { return std::holds_alternative<std::monostate>(value); }
  bool is_bool() const { return std::holds_alternative<bool>(value); }
  bool is_number() const { return std::holds_alternative<double>(value); }
  bool is_string() const { return std::holds_alternative<std::string>(value); }
  bool is_name() const { return std::holds_alternative<Name>(value); }
  bool is_array() const { return std::holds_alternative<Array>(value); }
  bool is_dict() const { return std::holds_alternative<Dict>(value); }
  bool is_stream() const { return std::holds_alternative<Stream>(value); }
  bool is_ref() const { return std::holds_alternative<Ref>(value); }

  bool boolean() const { return std::get<bool>(value); }
  double number() const { return std::get<double>(value); }
  long long integer() const { return static_cast<long long>(std::get<double>(value)); }
  const std::string& string() const { return std::get<std::string>(value); }
  const std::string& name() const { return std::get<Name>(value).value; }
  const Array& array() const { return std::get<Array>(value); }
  Array& array() { return std::get<Array>(value); }
  const Dict& dict() const { return std::get<Dict>(value); }
  Dict& dict() { return std::get<Dict>(value); }
  const Stream& stream() const { return std::get<Stream>(value); }
  Stream& stream() { return std::get<Stream>(value); }
  Ref ref() const { return std::get<Ref>(value); }

  std::optional<double> as_number() const {
    if (is_number()) return number();
    return std::nullopt;
  }
  std::optional<std::string> as_name() const {
    if (is_name()) return name();
    return std::nullopt;
  }
};

inline const Object* Dict::find(const std::string& key) const {
  for (const auto& [k, v] : items)
    if (k == key) return &v;
  return nullptr;
}

inline Object* Dict::find(const std::string& key) {
  for (auto& [k, v] : items)
    if (k == key) return &v;
  return nullptr;
}

inline void Dict::set(const std::string& key, Object value) {
  for (auto& [k, v] : items) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  items.emplace_back(key, std::move(value));
}

inline void Dict::erase(const std::string& key) {
  for (auto it = items.begin(); it != items.end(); ++it) {
    if (it->first == key) {
      items.erase(it);
      return;
    }
  }
}

}  // namespace reviewaudit::pdf
