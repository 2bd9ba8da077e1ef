#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "reviewaudit/core/error.hpp"

namespace reviewaudit {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("IoError", "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("IoError", "failed writing '" + path + "'");
}

}  // namespace reviewaudit
