#include <atomic>
#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "reviewaudit/core/error.hpp"
#include "reviewaudit/llm/backend.hpp"
#include "reviewaudit/llm/cache.hpp"
#include "reviewaudit/llm/client.hpp"
#include "reviewaudit/llm/mock.hpp"
#include "reviewaudit/llm/request.hpp"
#include "support/test_support.hpp"

namespace llm = reviewaudit::llm;
using testsup::ScriptedBackend;
using testsup::TempDir;

namespace {

llm::ChatRequest simple_request(const std::string& text) {
  llm::ChatRequest req;
  req.model = "test-model";
  req.messages = {{"system", "You are terse."}, {"user", text}};
  return req;
}

std::shared_ptr<ScriptedBackend> scripted(std::vector<ScriptedBackend::Step> steps) {
  return std::make_shared<ScriptedBackend>(std::move(steps));
}

llm::ClientOptions fast_options(const TempDir& dir) {
  llm::ClientOptions o;
  o.cache_dir = dir.str("cache");
  o.backoff_initial_s = 0.001;  // keep retry tests quick
  return o;
}

// Transport that records the request and replays a canned HTTP result.
class RecordingTransport : public llm::HttpTransport {
public:
  explicit RecordingTransport(llm::HttpResult result) : result_(std::move(result)) {}

  llm::HttpResult post_json(const std::string& base_url, const std::string& path,
                            const std::string& body,
                            const std::vector<std::pair<std::string, std::string>>& headers) override {
    last_base_url = base_url;
    last_path = path;
    last_body = body;
    last_headers = headers;
    return result_;
  }

  std::string last_base_url, last_path, last_body;
  std::vector<std::pair<std::string, std::string>> last_headers;

private:
  llm::HttpResult result_;
};

}  // namespace

TEST_CASE("canonical request json is stable and key-ordered") {
  llm::ChatRequest req = simple_request("hello");
  const std::string a = llm::canonical_request_json(req);
  const std::string b = llm::canonical_request_json(req);
  CHECK(a == b);
  CHECK(a.find(' ') == std::string::npos);  // compact form
  const auto j = nlohmann::json::parse(a);
  CHECK(j["model"] == "test-model");
  CHECK(j["messages"].size() == 2);
  CHECK(j["temperature"] == 0.0);
  CHECK(j["max_tokens"] == 1024);
  CHECK_FALSE(j.contains("seed"));

  req.seed = 42u;
  const auto with_seed = nlohmann::json::parse(llm::canonical_request_json(req));
  CHECK(with_seed["seed"] == 42);
}

TEST_CASE("request keys separate distinct requests") {
  const std::string a = llm::request_key(simple_request("one"));
  const std::string b = llm::request_key(simple_request("two"));
  CHECK(a.size() == 64);
  CHECK(a.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(a != b);
  CHECK(a == llm::request_key(simple_request("one")));
}

TEST_CASE("file cache round-trips a response") {
  TempDir dir("cache");
  llm::FileCache cache(dir.str("c"));
  const llm::ChatRequest req = simple_request("ping");
  llm::ChatResponse resp;
  resp.content = "pong";
  resp.model = "m1";
  resp.usage.prompt_tokens = 3;
  resp.usage.completion_tokens = 1;
  const std::string key = llm::request_key(req);
  CHECK_FALSE(cache.load(key).has_value());
  cache.store(key, req, resp);
  const auto loaded = cache.load(key);
  REQUIRE(loaded.has_value());
  CHECK(loaded->content == "pong");
  CHECK(loaded->model == "m1");
  CHECK(loaded->usage.prompt_tokens == 3);
  CHECK(loaded->from_cache);
}

TEST_CASE("client serves repeats from the cache") {
  TempDir dir("client");
  auto backend = scripted({{"answer", ""}});
  llm::Client client(backend, fast_options(dir));
  const llm::ChatRequest req = simple_request("question");

  const llm::ChatResponse first = client.complete(req);
  CHECK(first.content == "answer");
  CHECK_FALSE(first.from_cache);
  const llm::ChatResponse second = client.complete(req);
  CHECK(second.content == "answer");
  CHECK(second.from_cache);
  CHECK(backend->calls() == 1);
  const llm::CacheStats stats = client.stats();
  CHECK(stats.hits == 1);
  CHECK(stats.misses == 1);
}

TEST_CASE("cache persists across client instances") {
  TempDir dir("persist");
  const llm::ChatRequest req = simple_request("durable");
  {
    auto backend = scripted({{"kept", ""}});
    llm::Client client(backend, fast_options(dir));
    client.complete(req);
  }
  auto backend = scripted({{"should not be used", ""}});
  llm::Client client(backend, fast_options(dir));
  CHECK(client.complete(req).content == "kept");
  CHECK(backend->calls() == 0);
}

TEST_CASE("sampling without a seed bypasses the cache") {
  TempDir dir("nocache");
  auto backend = scripted({{"a", ""}, {"b", ""}});
  llm::Client client(backend, fast_options(dir));
  llm::ChatRequest req = simple_request("sampled");
  req.temperature = 0.7;
  CHECK(client.complete(req).content == "a");
  CHECK(client.complete(req).content == "b");
  CHECK(backend->calls() == 2);

  req.seed = 9u;  // pinned sampling is deterministic again, so cacheable
  CHECK(client.complete(req).content == "b");
  CHECK(client.complete(req).content == "b");
  CHECK(backend->calls() == 3);
}

TEST_CASE("offline mode never touches the backend") {
  TempDir dir("offline");
  const llm::ChatRequest req = simple_request("needed");
  {
    auto warm = scripted({{"cached answer", ""}});
    llm::Client client(warm, fast_options(dir));
    client.complete(req);
  }
  auto backend = scripted({{"live", ""}});
  llm::ClientOptions opts = fast_options(dir);
  opts.offline = true;
  llm::Client client(backend, opts);
  CHECK(client.complete(req).content == "cached answer");
  CHECK_THROWS_AS(client.complete(simple_request("uncached")), reviewaudit::OfflineMiss);
  CHECK(backend->calls() == 0);
}

TEST_CASE("transient failures are retried until the attempt budget runs out") {
  TempDir dir("retry");
  auto backend = scripted({{"", "unavailable"}, {"", "quota"}, {"recovered", ""}});
  llm::ClientOptions opts = fast_options(dir);
  opts.max_attempts = 3;
  llm::Client client(backend, opts);
  CHECK(client.complete(simple_request("flaky")).content == "recovered");
  CHECK(backend->calls() == 3);

  auto hopeless = scripted({{"", "unavailable"}});
  llm::ClientOptions strict = fast_options(dir);
  strict.max_attempts = 2;
  llm::Client strict_client(hopeless, strict);
  CHECK_THROWS_AS(strict_client.complete(simple_request("down")),
                  reviewaudit::BackendUnavailable);
  CHECK(hopeless->calls() == 2);
}

TEST_CASE("identical concurrent requests are coalesced into one call") {
  class SlowBackend : public llm::Backend {
  public:
    llm::ChatResponse complete(const llm::ChatRequest&) override {
      calls.fetch_add(1);
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
      llm::ChatResponse r;
      r.content = "slow";
      return r;
    }
    std::atomic<int> calls{0};
  };

  TempDir dir("coalesce");
  auto backend = std::make_shared<SlowBackend>();
  llm::Client client(backend, fast_options(dir));
  const llm::ChatRequest req = simple_request("same");

  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 4; ++i)
    threads.emplace_back([&] {
      if (client.complete(req).content == "slow") ok.fetch_add(1);
    });
  for (std::thread& t : threads) t.join();
  CHECK(ok.load() == 4);
  CHECK(backend->calls.load() == 1);
  CHECK(client.stats().coalesced == 3);
}

TEST_CASE("http backend speaks the chat-completions protocol") {
  const std::string body = nlohmann::json{
      {"model", "remote-1"},
      {"choices", {{{"message", {{"role", "assistant"}, {"content", "hi there"}}}}}},
      {"usage", {{"prompt_tokens", 12}, {"completion_tokens", 4}}}}.dump();
  auto transport = std::make_shared<RecordingTransport>(llm::HttpResult{200, body});
  llm::HttpBackend backend(transport, "http://example.test", "sk-secret");
  llm::ChatRequest req = simple_request("hello");
  req.seed = 5u;
  const llm::ChatResponse resp = backend.complete(req);
  CHECK(resp.content == "hi there");
  CHECK(resp.model == "remote-1");
  CHECK(resp.usage.prompt_tokens == 12);
  CHECK(resp.usage.completion_tokens == 4);

  CHECK(transport->last_base_url == "http://example.test");
  CHECK(transport->last_path == "/chat/completions");
  const auto sent = nlohmann::json::parse(transport->last_body);
  CHECK(sent["model"] == "test-model");
  CHECK(sent["seed"] == 5);
  REQUIRE(transport->last_headers.size() == 1);
  CHECK(transport->last_headers[0].first == "Authorization");
  CHECK(transport->last_headers[0].second == "Bearer sk-secret");
}

TEST_CASE("http backend maps failure statuses to typed errors") {
  const llm::ChatRequest req = simple_request("x");
  {
    auto t = std::make_shared<RecordingTransport>(llm::HttpResult{429, "slow down"});
    CHECK_THROWS_AS(llm::HttpBackend(t, "http://b", "").complete(req),
                    reviewaudit::QuotaExceeded);
  }
  {
    auto t = std::make_shared<RecordingTransport>(llm::HttpResult{500, "boom"});
    CHECK_THROWS_AS(llm::HttpBackend(t, "http://b", "").complete(req),
                    reviewaudit::BackendUnavailable);
  }
  {
    auto t = std::make_shared<RecordingTransport>(llm::HttpResult{200, "not json"});
    CHECK_THROWS_AS(llm::HttpBackend(t, "http://b", "").complete(req),
                    reviewaudit::BackendUnavailable);
  }
}

TEST_CASE("endpoint overrides beat environment variables") {
  setenv("REVIEW_AUDIT_BASE_URL", "http://env.test", 1);
  setenv("REVIEW_AUDIT_API_KEY", "env-key", 1);
  const llm::EndpointConfig from_env = llm::endpoint_from_env();
  CHECK(from_env.base_url == "http://env.test");
  CHECK(from_env.api_key == "env-key");
  const llm::EndpointConfig overridden =
      llm::endpoint_from_env("http://flag.test", "flag-key");
  CHECK(overridden.base_url == "http://flag.test");
  CHECK(overridden.api_key == "flag-key");
  unsetenv("REVIEW_AUDIT_BASE_URL");
  unsetenv("REVIEW_AUDIT_API_KEY");
  CHECK(llm::endpoint_from_env().base_url == "https://api.openai.com/v1");
}

TEST_CASE("mock backend is deterministic") {
  llm::MockBackend mock;
  llm::ChatRequest req = simple_request("Task: rate\nnovel and clear work, no weaknesses");
  const llm::ChatResponse a = mock.complete(req);
  const llm::ChatResponse b = mock.complete(req);
  CHECK(a.content == b.content);
  CHECK(a.model == "offline-mock-1");
}
