#include <atomic>
#include <cstdlib>
#include <string>

#include "mfgp/error.hpp"
#include "mfgp/simd/kernels.hpp"

namespace mfgp::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("MFGP_SIMD")) {
    if (auto b = parse_backend(env); b && backend_available(*b)) return *b;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

bool backend_available(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& kernels(Backend b) {
  if (!backend_available(b)) {
    throw ParameterError("SIMD backend '" + std::string(backend_name(b)) +
                         "' is not supported on this CPU");
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::avx2) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

const KernelTable& kernels() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  if (current().load(std::memory_order_relaxed) == Backend::avx2) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw ParameterError("SIMD backend '" + std::string(backend_name(b)) +
                         "' is not supported on this CPU");
  }
  current().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  return std::nullopt;
}

}  // namespace mfgp::simd
