#pragma once

#include <string>

#include "reviewaudit/pdf/document.hpp"

namespace reviewaudit::pdf {

// Serializes one object body (no "N 0 obj" wrapper). Streams get their
// /Length rewritten to match the raw data they carry.
std::string serialize_object(const Object& obj);

// Serializes a whole document with a regenerated classic cross-reference
// table. Output is a pure function of the Document contents.
std::string write_document(const Document& doc);

struct WriteOptions {
  bool xref_stream = false;   // cross-reference stream instead of a table
  bool pack_objects = false;  // move dict/array objects into an object stream
                              // (requires xref_stream)
};

std::string write_document(const Document& doc, const WriteOptions& opts);

}  // namespace reviewaudit::pdf
