#include "reviewaudit/llm/client.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"
#include "reviewaudit/core/rng.hpp"

namespace reviewaudit::llm {

namespace {

class HttplibTransport : public HttpTransport {
public:
  HttpResult post_json(const std::string& base_url, const std::string& path,
                       const std::string& body,
                       const std::vector<std::pair<std::string, std::string>>& headers) override {
    httplib::Client cli(base_url);
    cli.set_connection_timeout(15, 0);
    cli.set_read_timeout(120, 0);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = cli.Post(path, h, body, "application/json");
    if (!res)
      throw BackendUnavailable("no response from " + base_url +
                               " (error " + httplib::to_string(res.error()) + ")");
    return HttpResult{res->status, res->body};
  }
};

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport() {
  return std::make_unique<HttplibTransport>();
}

HttpBackend::HttpBackend(std::shared_ptr<HttpTransport> transport, std::string base_url,
                         std::string api_key)
    : transport_(std::move(transport)),
      base_url_(std::move(base_url)),
      api_key_(std::move(api_key)) {}

ChatResponse HttpBackend::complete(const ChatRequest& req) {
  nlohmann::ordered_json body;
  body["model"] = req.model;
  nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
  for (const ChatMessage& m : req.messages)
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  body["messages"] = std::move(msgs);
  body["temperature"] = req.temperature;
  body["max_tokens"] = req.max_tokens;
  if (req.seed) body["seed"] = *req.seed;

  std::vector<std::pair<std::string, std::string>> headers;
  if (!api_key_.empty()) headers.emplace_back("Authorization", "Bearer " + api_key_);

  const HttpResult res =
      transport_->post_json(base_url_, "/chat/completions", body.dump(), headers);
  if (res.status == 429)
    throw QuotaExceeded("rate limited by backend (HTTP 429)");
  if (res.status < 200 || res.status >= 300)
    throw BackendUnavailable("backend returned HTTP " + std::to_string(res.status));

  try {
    const auto j = nlohmann::json::parse(res.body);
    ChatResponse out;
    out.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
    out.model = j.value("model", req.model);
    if (j.contains("usage")) {
      out.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0LL);
      out.usage.completion_tokens = j["usage"].value("completion_tokens", 0LL);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw BackendUnavailable(std::string("malformed completion response: ") + e.what());
  }
}

std::string default_cache_dir() {
  if (const char* env = std::getenv("REVIEW_AUDIT_CACHE_DIR"); env && *env) return env;
  return "review-audit-cache";
}

EndpointConfig endpoint_from_env(const std::string& base_url_override,
                                 const std::string& api_key_override) {
  EndpointConfig cfg;
  if (!base_url_override.empty()) {
    cfg.base_url = base_url_override;
  } else if (const char* env = std::getenv("REVIEW_AUDIT_BASE_URL"); env && *env) {
    cfg.base_url = env;
  }
  if (!api_key_override.empty()) {
    cfg.api_key = api_key_override;
  } else if (const char* env = std::getenv("REVIEW_AUDIT_API_KEY"); env && *env) {
    cfg.api_key = env;
  }
  return cfg;
}

Client::Client(std::shared_ptr<Backend> backend, ClientOptions opts)
    : backend_(std::move(backend)),
      opts_(std::move(opts)),
      slots_(std::clamp(opts_.max_concurrent, 1, 256)) {
  if (opts_.cache_enabled) {
    const std::string dir = opts_.cache_dir.empty() ? default_cache_dir() : opts_.cache_dir;
    cache_.emplace(dir);
  }
}

CacheStats Client::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

const std::filesystem::path& Client::cache_dir() const {
  static const std::filesystem::path none;
  return cache_ ? cache_->dir() : none;
}

bool Client::cache_eligible(const ChatRequest& req) const {
  if (!cache_) return false;
  // Nondeterministic sampling would poison the cache unless pinned by a seed.
  return req.temperature == 0.0 || req.seed.has_value();
}

ChatResponse Client::call_with_retry(const ChatRequest& req, const std::string& key) {
  SplitMix64 jitter(derive_seed(fnv1a64(key), "retry-jitter"));
  for (int attempt = 1;; ++attempt) {
    try {
      return backend_->complete(req);
    } catch (const QuotaExceeded&) {
      if (attempt >= opts_.max_attempts) throw;
    } catch (const OfflineMiss&) {
      throw;  // not a transient condition
    } catch (const Error& e) {
      if (std::string(e.kind()) != "BackendUnavailable") throw;
      if (attempt >= opts_.max_attempts) throw;
      log::warn(std::string("backend attempt ") + std::to_string(attempt) +
                " failed: " + e.what());
    }
    const double base = opts_.backoff_initial_s * std::pow(2.0, attempt - 1);
    const double delay = base * (0.5 + jitter.next_double());
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));
  }
}

ChatResponse Client::complete(const ChatRequest& req) {
  const std::string key = request_key(req);
  const bool eligible = cache_eligible(req);

  if (eligible) {
    if (auto hit = cache_->load(key)) {
      std::lock_guard lock(mu_);
      ++stats_.hits;
      return *hit;
    }
  }
  if (opts_.offline)
    throw OfflineMiss("offline mode and no cached response for request " + key.substr(0, 12));

  // Coalesce identical concurrent requests into one backend call.
  std::shared_future<ChatResponse> flight;
  bool owner = false;
  std::promise<ChatResponse> promise;
  {
    std::lock_guard lock(mu_);
    const auto it = in_flight_.find(key);
    if (it != in_flight_.end()) {
      flight = it->second;
      ++stats_.coalesced;
    } else {
      flight = promise.get_future().share();
      in_flight_[key] = flight;
      owner = true;
      ++stats_.misses;
    }
  }
  if (!owner) return flight.get();

  try {
    slots_.acquire();
    ChatResponse resp;
    try {
      resp = call_with_retry(req, key);
    } catch (...) {
      slots_.release();
      throw;
    }
    slots_.release();
    if (eligible) cache_->store(key, req, resp);
    promise.set_value(resp);
    {
      std::lock_guard lock(mu_);
      in_flight_.erase(key);
    }
    resp.from_cache = false;
    return resp;
  } catch (...) {
    promise.set_exception(std::current_exception());
    {
      std::lock_guard lock(mu_);
      in_flight_.erase(key);
    }
    throw;
  }
}

}  // namespace reviewaudit::llm
