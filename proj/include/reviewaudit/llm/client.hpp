#pragma once

#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>

#include "reviewaudit/llm/backend.hpp"
#include "reviewaudit/llm/cache.hpp"
#include "reviewaudit/llm/request.hpp"

namespace reviewaudit::llm {

struct ClientOptions {
  // Empty means: use REVIEW_AUDIT_CACHE_DIR, else "review-audit-cache".
  std::string cache_dir;
  bool cache_enabled = true;
  // Offline: serve from cache only; a miss raises OfflineMiss instead of
  // touching the backend.
  bool offline = false;
  int max_attempts = 3;
  double backoff_initial_s = 1.0;   // doubled per retry, with seeded jitter
  int max_concurrent = 4;           // in-flight backend calls
};

struct CacheStats {
  long long hits = 0;
  long long misses = 0;
  long long coalesced = 0;  // callers that joined an identical in-flight request
};

// Completion client with a persistent response cache, request coalescing,
// bounded concurrency, and retry with exponential backoff. Thread-safe.
class Client {
public:
  Client(std::shared_ptr<Backend> backend, ClientOptions opts = {});

  ChatResponse complete(const ChatRequest& req);

  CacheStats stats() const;
  const std::filesystem::path& cache_dir() const;

private:
  bool cache_eligible(const ChatRequest& req) const;
  ChatResponse call_with_retry(const ChatRequest& req, const std::string& key);

  std::shared_ptr<Backend> backend_;
  ClientOptions opts_;
  std::optional<FileCache> cache_;

  mutable std::mutex mu_;
  CacheStats stats_;
  std::map<std::string, std::shared_future<ChatResponse>> in_flight_;
  std::counting_semaphore<256> slots_;
};

// Resolves endpoint configuration from explicit values and environment
// variables (REVIEW_AUDIT_API_KEY, REVIEW_AUDIT_BASE_URL).
struct EndpointConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
};
EndpointConfig endpoint_from_env(const std::string& base_url_override = {},
                                 const std::string& api_key_override = {});

std::string default_cache_dir();

}  // namespace reviewaudit::llm
