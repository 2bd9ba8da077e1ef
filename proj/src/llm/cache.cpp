#include "reviewaudit/llm/cache.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"

namespace reviewaudit::llm {

FileCache::FileCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error("CacheError", "cannot create cache directory " + dir_.string());
}

std::optional<ChatResponse> FileCache::load(const std::string& key) const {
  const std::filesystem::path path = dir_ / (key + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
    ChatResponse resp;
    const auto& r = j.at("response");
    resp.content = r.at("content").get<std::string>();
    resp.model = r.value("model", std::string{});
    if (r.contains("usage")) {
      resp.usage.prompt_tokens = r["usage"].value("prompt_tokens", 0LL);
      resp.usage.completion_tokens = r["usage"].value("completion_tokens", 0LL);
    }
    resp.from_cache = true;
    return resp;
  } catch (const nlohmann::json::exception&) {
    log::warn("ignoring unreadable cache entry " + path.string());
    return std::nullopt;
  }
}

void FileCache::store(const std::string& key, const ChatRequest& req,
                      const ChatResponse& resp) const {
  nlohmann::ordered_json j;
  j["request"] = nlohmann::ordered_json::parse(canonical_request_json(req));
  nlohmann::ordered_json r;
  r["content"] = resp.content;
  r["model"] = resp.model;
  r["usage"] = {{"prompt_tokens", resp.usage.prompt_tokens},
                {"completion_tokens", resp.usage.completion_tokens}};
  j["response"] = std::move(r);

  const std::filesystem::path final_path = dir_ / (key + ".json");
  std::ostringstream tmp_name;
  tmp_name << key << ".tmp." << std::this_thread::get_id();
  const std::filesystem::path tmp_path = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      log::warn("cannot write cache entry " + tmp_path.string());
      return;
    }
    out << j.dump(2) << "\n";
  }
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) {
    log::warn("cannot finalize cache entry " + final_path.string());
    std::filesystem::remove(tmp_path, ec);
  }
}

}  // namespace reviewaudit::llm
