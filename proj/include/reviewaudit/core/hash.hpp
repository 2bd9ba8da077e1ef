#pragma once

#include <string>
#include <string_view>

namespace reviewaudit {

// SHA-256 hex digest (OpenSSL EVP). Used for content-addressed cache keys.
std::string sha256_hex(std::string_view data);

}  // namespace reviewaudit
