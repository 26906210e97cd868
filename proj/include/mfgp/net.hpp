#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mfgp/field.hpp"
#include "mfgp/grid.hpp"
#include "mfgp/supply.hpp"

namespace mfgp {

/// Widths of the recurrent hidden state and the two sigmoid layers of the head.
struct NetDims {
  std::size_t d_h = 32;
  std::size_t d_1 = 32;
  std::size_t d_2 = 32;
  bool operator==(const NetDims&) const = default;
};

/// Parameter blocks in storage order.
///   w_h: d_h x (2 + d_h), input (t, Q, h_prev)
///   w_1: d_1 x (1 + d_h), input (x, h)
///   w_2: d_2 x d_1
///   w_3: 1 x d_2
enum class Block : std::size_t { w_h, b_h, w_1, b_1, w_2, b_2, w_3, b_3 };
inline constexpr std::size_t kBlockCount = 8;

struct BlockShape {
  std::size_t rows;
  std::size_t cols;
  std::size_t size() const noexcept { return rows * cols; }
};

BlockShape block_shape(const NetDims& dims, Block b) noexcept;
const char* block_name(Block b) noexcept;
std::size_t parameter_count(const NetDims& dims) noexcept;

/// Flat storage shaped like the network. NetParams and GradientAccumulator
/// share the layout but are distinct types.
template <class Tag>
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(const NetDims& dims);

  const NetDims& dims() const noexcept { return dims_; }
  std::span<double> block(Block b) noexcept;
  std::span<const double> block(Block b) const noexcept;
  std::span<double> flat() noexcept { return values_; }
  std::span<const double> flat() const noexcept { return values_; }

  bool operator==(const ParamVector&) const = default;

 private:
  NetDims dims_{};
  std::array<std::size_t, kBlockCount + 1> offsets_{};
  std::vector<double> values_;
};

struct ParamsTag;
struct GradsTag;
using NetParams = ParamVector<ParamsTag>;
using GradientAccumulator = ParamVector<GradsTag>;

extern template class ParamVector<ParamsTag>;
extern template class ParamVector<GradsTag>;

/// Glorot-uniform weights, zero biases; deterministic in seed.
NetParams init_params(const NetDims& dims, std::uint64_t seed);

/// h_k = tanh(W_h (t_k, Q_k, h_prev) + b_h)
std::vector<double> rnn_cell_step(const NetParams& params, double t_k, double q_k,
                                  std::span<const double> h_prev);

/// phi = W3 S(W2 S(W1 (x, h_k) + b1) + b2) + b3
double head_forward(const NetParams& params, double x, std::span<const double> h_k);

/// Activations kept from a forward pass for backpropagation through time.
struct ForwardRecord {
  GridSpec grid;
  NetDims dims;
  std::vector<double> inputs;  // ext_t x (2 + d_h)
  std::vector<double> hidden;  // ext_t x d_h
  std::vector<double> z1;      // ext_t x ext_x x d_1
  std::vector<double> z2;      // ext_t x ext_x x d_2
  PotentialField field;
};

/// Runs the recurrence over every extended time level with h_0 = 0, then the
/// head at every extended space point. Level k sees only Q_0..Q_k.
PotentialField forward_field(const NetParams& params, const GridSpec& grid,
                             const SupplyPath& path);
ForwardRecord record_forward(const NetParams& params, const GridSpec& grid,
                             const SupplyPath& path);

/// Reverse-mode gradient of a scalar loss given dLoss/dphi on the extended
/// grid. Throws NumericError naming the first non-finite node.
GradientAccumulator backward(const NetParams& params, const ForwardRecord& record,
                             const Array2& dloss_dphi);

}  // namespace mfgp
