#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace reviewaudit::llm {

struct HttpResult {
  int status = 0;
  std::string body;
};

// Seam between the client and the network. Tests substitute scripted or
// poisoned transports; production uses the cpp-httplib implementation.
class HttpTransport {
public:
  virtual ~HttpTransport() = default;

  // POSTs a JSON body. Throws BackendUnavailable when no response arrives
  // (connection refused, DNS failure, timeout).
  virtual HttpResult post_json(const std::string& base_url, const std::string& path,
                               const std::string& body,
                               const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

std::unique_ptr<HttpTransport> make_httplib_transport();

}  // namespace reviewaudit::llm
