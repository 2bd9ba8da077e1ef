#include "reviewaudit/core/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <stdexcept>

namespace reviewaudit {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: EVP_Digest failed");
  }
  std::string hex(2 * len, '0');
  static const char* alphabet = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    hex[2 * i] = alphabet[digest[i] >> 4];
    hex[2 * i + 1] = alphabet[digest[i] & 0x0f];
  }
  return hex;
}

}  // namespace reviewaudit
