#pragma once

#include <string>
#include <vector>

#include "reviewaudit/pdf/document.hpp"

namespace reviewaudit::pdf {

// Deterministic synthetic-paper builder used by tests and the demo corpus.
// Rendering is a pure function of the description: same input, same bytes.

struct FixtureSection {
  std::string heading;
  std::string body;
};

struct FixtureDesc {
  std::string title;
  std::vector<FixtureSection> sections;
  std::vector<std::string> captions;  // "Figure N: ..." blocks, placed between sections
  bool two_column = false;
  bool compress_streams = false;  // Flate-encode page content
  bool xref_stream = false;       // write a cross-reference stream
  bool pack_objects = false;      // pack dicts into an object stream
  double title_size = 18.0;
  double heading_size = 12.0;
  double body_size = 10.0;
  double caption_size = 9.0;
};

Document build_fixture(const FixtureDesc& desc);

// build_fixture + serialization honoring the xref flags.
std::string render_fixture(const FixtureDesc& desc);

}  // namespace reviewaudit::pdf
