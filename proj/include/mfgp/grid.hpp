#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfgp {

/// Uniform space-time grid. Time levels k = 0..n_t-1 sit at t_lo + k*h_t,
/// space points i = 0..n_x-1 at x_lo + i*h_x. One extra level and one extra
/// column are appended so that forward differences exist at every interior
/// point; the extended grid covers [t_lo, t_hi + h_t] x [x_lo, x_hi + h_x].
struct GridSpec {
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::size_t n_t = 2;
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::size_t n_x = 2;
  double h_t = 1.0;
  double h_x = 1.0;

  std::size_t ext_t() const noexcept { return n_t + 1; }
  std::size_t ext_x() const noexcept { return n_x + 1; }
  double time(std::size_t k) const noexcept { return t_lo + static_cast<double>(k) * h_t; }
  double space(std::size_t i) const noexcept { return x_lo + static_cast<double>(i) * h_x; }

  bool operator==(const GridSpec&) const = default;
};

/// Grid on [0, T] x [x_lo, x_hi] with n_t time and n_x space points.
/// Throws ParameterError for counts below 2 or an empty interval.
GridSpec build_grid(double T, std::size_t n_t, double x_lo, double x_hi, std::size_t n_x);

/// Dense row-major array indexed by (time level, space index).
class Array2 {
 public:
  Array2() = default;
  Array2(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }

  bool operator==(const Array2&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace mfgp
