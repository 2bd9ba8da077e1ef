#include "reviewaudit/llm/request.hpp"

#include "json.hpp"
#include "reviewaudit/core/hash.hpp"

namespace reviewaudit::llm {

std::string canonical_request_json(const ChatRequest& req) {
  nlohmann::ordered_json j;
  j["model"] = req.model;
  nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
  for (const ChatMessage& m : req.messages) {
    nlohmann::ordered_json msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    msgs.push_back(std::move(msg));
  }
  j["messages"] = std::move(msgs);
  j["temperature"] = req.temperature;
  j["max_tokens"] = req.max_tokens;
  if (req.seed) j["seed"] = *req.seed;
  return j.dump();
}

std::string request_key(const ChatRequest& req) {
  return sha256_hex(canonical_request_json(req));
}

}  // namespace reviewaudit::llm
