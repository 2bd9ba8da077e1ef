#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "reviewaudit/llm/request.hpp"

namespace reviewaudit::llm {

// Content-addressed response store: one JSON file per request hash, written
// atomically (temp file + rename) so concurrent writers cannot corrupt it.
class FileCache {
public:
  explicit FileCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<ChatResponse> load(const std::string& key) const;
  void store(const std::string& key, const ChatRequest& req, const ChatResponse& resp) const;

private:
  std::filesystem::path dir_;
};

}  // namespace reviewaudit::llm
