#pragma once

// Dense kernels behind the network's forward and backward passes. Each
// kernel has a scalar reference implementation and, on x86-64, an AVX2+FMA
// variant; the active table is chosen once at startup from CPUID and may be
// overridden with MFGP_SIMD=scalar|avx2 or set_backend().
//
// Matrices are row-major with `cols` as the row stride.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace mfgp::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
  // y = W x + b; b may be null.
  void (*affine)(const double* w, std::size_t rows, std::size_t cols, const double* x,
                 const double* b, double* y);
  // y += W^T v
  void (*gemv_t_acc)(const double* w, std::size_t rows, std::size_t cols, const double* v,
                     double* y);
  // G += u v^T
  void (*outer_acc)(double* g, std::size_t rows, std::size_t cols, const double* u,
                    const double* v);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

bool backend_available(Backend b) noexcept;
const KernelTable& kernels(Backend b);
const KernelTable& kernels() noexcept;
Backend active_backend() noexcept;
/// Throws ParameterError when the CPU lacks the requested instruction set.
void set_backend(Backend b);
std::string_view backend_name(Backend b) noexcept;
std::optional<Backend> parse_backend(std::string_view name) noexcept;

namespace detail {
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

// Span wrappers over the active table.

inline void affine(std::span<const double> w, std::size_t rows, std::size_t cols,
                   std::span<const double> x, std::span<const double> b, std::span<double> y) {
  kernels().affine(w.data(), rows, cols, x.data(), b.empty() ? nullptr : b.data(), y.data());
}

inline void gemv_t_acc(std::span<const double> w, std::size_t rows, std::size_t cols,
                       std::span<const double> v, std::span<double> y) {
  kernels().gemv_t_acc(w.data(), rows, cols, v.data(), y.data());
}

inline void outer_acc(std::span<double> g, std::size_t rows, std::size_t cols,
                      std::span<const double> u, std::span<const double> v) {
  kernels().outer_acc(g.data(), rows, cols, u.data(), v.data());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  kernels().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace mfgp::simd
