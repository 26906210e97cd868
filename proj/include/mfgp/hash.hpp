#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace mfgp {

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::span<const unsigned char> bytes,
                           std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a(std::string_view s) noexcept {
  return fnv1a({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
}

}  // namespace mfgp
