#include "mfgp/simd/kernels.hpp"

namespace mfgp::simd {
namespace {

void affine_scalar(const double* w, std::size_t rows, std::size_t cols, const double* x,
                   const double* b, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = b ? acc + b[r] : acc;
  }
}

void gemv_t_acc_scalar(const double* w, std::size_t rows, std::size_t cols, const double* v,
                       double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    const double s = v[r];
    for (std::size_t c = 0; c < cols; ++c) y[c] += s * wr[c];
  }
}

void outer_acc_scalar(double* g, std::size_t rows, std::size_t cols, const double* u,
                      const double* v) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* gr = g + r * cols;
    const double s = u[r];
    for (std::size_t c = 0; c < cols; ++c) gr[c] += s * v[c];
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

namespace detail {
const KernelTable scalar_table{affine_scalar, gemv_t_acc_scalar, outer_acc_scalar, dot_scalar,
                               axpy_scalar};
}  // namespace detail

}  // namespace mfgp::simd
