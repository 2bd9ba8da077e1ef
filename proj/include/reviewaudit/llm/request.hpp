#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace reviewaudit::llm {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::optional<std::uint64_t> seed;
};

struct ChatUsage {
  long long prompt_tokens = 0;
  long long completion_tokens = 0;
};

struct ChatResponse {
  std::string content;
  std::string model;
  ChatUsage usage;
  bool from_cache = false;
};

// Canonical JSON for a request: fixed key order, no whitespace. Equal
// requests produce equal bytes, which makes the hash a stable cache key.
std::string canonical_request_json(const ChatRequest& req);

// SHA-256 of the canonical form, hex-encoded.
std::string request_key(const ChatRequest& req);

}  // namespace reviewaudit::llm
