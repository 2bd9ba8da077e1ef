#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "reviewaudit/pdf/fixture.hpp"
#include "reviewaudit/rater/record.hpp"

namespace reviewaudit::audit {

// Deterministic demo corpus: synthetic paper PDFs plus a papers.jsonl file
// and ready-to-run manifests, all derived from (papers, seed) alone so two
// generations into fresh directories produce byte-identical content (paths
// aside). Papers cycle through single/two-column layouts and the
// compressed / cross-reference-stream / object-stream writer variants.
struct FixtureOptions {
  int papers = 10;
  std::uint64_t seed = 7;
  bool write_manifests = true;
};

struct FixtureCorpus {
  std::filesystem::path corpus_path;             // papers.jsonl
  std::vector<std::filesystem::path> pdf_paths;  // one per record
  std::vector<std::filesystem::path> manifest_paths;
  std::vector<rater::PaperRecord> records;
};

// Builds the description of fixture paper `index` of `papers`; exposed so
// tests can render papers without touching the filesystem.
pdf::FixtureDesc fixture_paper_desc(int index, int papers, std::uint64_t seed);

FixtureCorpus generate_fixture_corpus(const std::filesystem::path& dir,
                                      const FixtureOptions& options = {});

}  // namespace reviewaudit::audit
