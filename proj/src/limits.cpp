#include "nbhd/limits.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace nbhd {

std::uint64_t effective_limit(std::uint64_t default_limit) {
  const char* raw = std::getenv("NBHD_MAX_STATES");
  if (raw == nullptr) return default_limit;
  std::uint64_t value = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) return default_limit;
  return value < default_limit ? value : default_limit;
}

}  // namespace nbhd
