#pragma once

#include <memory>
#include <string>

#include "reviewaudit/llm/request.hpp"
#include "reviewaudit/llm/transport.hpp"

namespace reviewaudit::llm {

// A completion provider. Implementations may talk to a real service or
// synthesize responses locally.
class Backend {
public:
  virtual ~Backend() = default;
  virtual ChatResponse complete(const ChatRequest& req) = 0;
};

// OpenAI-compatible chat-completions endpoint. Maps HTTP 429 to
// QuotaExceeded and other failures to BackendUnavailable.
class HttpBackend : public Backend {
public:
  HttpBackend(std::shared_ptr<HttpTransport> transport, std::string base_url,
              std::string api_key);

  ChatResponse complete(const ChatRequest& req) override;

private:
  std::shared_ptr<HttpTransport> transport_;
  std::string base_url_;
  std::string api_key_;
};

}  // namespace reviewaudit::llm
