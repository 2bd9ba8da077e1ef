#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reviewaudit/pdf/object.hpp"

namespace reviewaudit::pdf {

// In-memory PDF: the object table plus the trailer. Object generations are
// flattened away; the newest generation wins during load.
struct Document {
  std::map<int, Object> objects;
  Dict trailer;

  const Object* get(int num) const {
    auto it = objects.find(num);
    return it == objects.end() ? nullptr : &it->second;
  }

  // Follows reference chains; returns nullptr for dangling refs.
  const Object* resolve(const Object* obj) const {
    int hops = 0;
    while (obj != nullptr && obj->is_ref()) {
      if (++hops > 32) return nullptr;
      obj = get(obj->ref().num);
    }
    return obj;
  }

  const Object* resolve_key(const Dict& dict, const std::string& key) const {
    return resolve(dict.find(key));
  }

  int next_object_number() const {
    return objects.empty() ? 1 : objects.rbegin()->first + 1;
  }

  int add(Object obj) {
    const int num = next_object_number();
    objects.emplace(num, std::move(obj));
    return num;
  }

  // Page object numbers in document order (depth-first walk of the page tree).
  std::vector<int> page_numbers() const;

  // Decoded content bytes of one page (all /Contents streams, joined).
  std::string page_content(int page_num) const;

  // Effective /MediaBox for a page, walking up the tree; defaults to letter.
  std::array<double, 4> media_box(int page_num) const;

  // Effective /Resources dictionary for a page (may be inherited).
  const Dict* resources(int page_num) const;
};

// Decodes a stream's data per its /Filter entry. Supports FlateDecode with
// optional PNG predictors; unknown filters return std::nullopt.
std::optional<std::string> decode_stream(const Document& doc, const Stream& stream);

// Variant for streams whose /Filter and /DecodeParms must be direct values
// (cross-reference streams), usable before a Document exists.
std::optional<std::string> decode_stream(const Stream& stream);

// zlib helpers used by the reader and writer.
std::string zlib_inflate(const std::string& data);
std::string zlib_deflate(const std::string& data);

}  // namespace reviewaudit::pdf
