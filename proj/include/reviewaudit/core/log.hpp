#pragma once

#include <iostream>
#include <mutex>
#include <string>

namespace reviewaudit::log {

namespace detail {
inline std::mutex& mutex() {
  static std::mutex m;
  return m;
}
inline bool& quiet_flag() {
  static bool q = false;
  return q;
}
}  // namespace detail

inline void set_quiet(bool q) { detail::quiet_flag() = q; }

inline void warn(const std::string& msg) {
  if (detail::quiet_flag()) return;
  std::lock_guard<std::mutex> lock(detail::mutex());
  std::cerr << "[review-audit] warning: " << msg << "\n";
}

inline void info(const std::string& msg) {
  if (detail::quiet_flag()) return;
  std::lock_guard<std::mutex> lock(detail::mutex());
  std::cerr << "[review-audit] " << msg << "\n";
}

}  // namespace reviewaudit::log
