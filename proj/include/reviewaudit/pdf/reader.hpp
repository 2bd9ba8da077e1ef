#pragma once

#include <string>
#include <string_view>

#include "reviewaudit/pdf/document.hpp"

namespace reviewaudit::pdf {

// Parses a complete PDF file. Follows the xref (classic tables, xref streams
// and object streams); falls back to a full-file object scan when the xref is
// broken. Throws MalformedPdf / EncryptedPdf.
Document read_document(std::string_view bytes);

}  // namespace reviewaudit::pdf
