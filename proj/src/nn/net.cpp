#include "mfgp/net.hpp"

#include <cmath>
#include <random>
#include <string>

#include "mfgp/error.hpp"
#include "mfgp/simd/kernels.hpp"

namespace mfgp {
namespace {

inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

void check_finite(std::span<const double> v, const std::string& node) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError(node, "non-finite value at " + node);
  }
}

std::string at(const char* what, std::size_t k) { return std::string(what) + "[k=" + std::to_string(k) + "]"; }

std::string at(const char* what, std::size_t k, std::size_t i) {
  return std::string(what) + "[k=" + std::to_string(k) + ",i=" + std::to_string(i) + "]";
}

}  // namespace

BlockShape block_shape(const NetDims& d, Block b) noexcept {
  switch (b) {
    case Block::w_h: return {d.d_h, 2 + d.d_h};
    case Block::b_h: return {d.d_h, 1};
    case Block::w_1: return {d.d_1, 1 + d.d_h};
    case Block::b_1: return {d.d_1, 1};
    case Block::w_2: return {d.d_2, d.d_1};
    case Block::b_2: return {d.d_2, 1};
    case Block::w_3: return {1, d.d_2};
    case Block::b_3: return {1, 1};
  }
  return {0, 0};
}

const char* block_name(Block b) noexcept {
  static constexpr const char* names[] = {"W_h", "b_h", "W1", "b1", "W2", "b2", "W3", "b3"};
  return names[static_cast<std::size_t>(b)];
}

std::size_t parameter_count(const NetDims& d) noexcept {
  std::size_t n = 0;
  for (std::size_t b = 0; b < kBlockCount; ++b) n += block_shape(d, static_cast<Block>(b)).size();
  return n;
}

template <class Tag>
ParamVector<Tag>::ParamVector(const NetDims& dims) : dims_(dims) {
  if (dims.d_h == 0 || dims.d_1 == 0 || dims.d_2 == 0) {
    throw ParameterError("network widths must be at least 1");
  }
  offsets_[0] = 0;
  for (std::size_t b = 0; b < kBlockCount; ++b) {
    offsets_[b + 1] = offsets_[b] + block_shape(dims, static_cast<Block>(b)).size();
  }
  values_.assign(offsets_[kBlockCount], 0.0);
}

template <class Tag>
std::span<double> ParamVector<Tag>::block(Block b) noexcept {
  const auto i = static_cast<std::size_t>(b);
  return std::span<double>(values_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

template <class Tag>
std::span<const double> ParamVector<Tag>::block(Block b) const noexcept {
  const auto i = static_cast<std::size_t>(b);
  return std::span<const double>(values_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

template class ParamVector<ParamsTag>;
template class ParamVector<GradsTag>;

NetParams init_params(const NetDims& dims, std::uint64_t seed) {
  NetParams p(dims);
  std::mt19937_64 rng(seed);
  for (Block b : {Block::w_h, Block::w_1, Block::w_2, Block::w_3}) {
    const BlockShape s = block_shape(dims, b);
    const double bound = std::sqrt(6.0 / static_cast<double>(s.rows + s.cols));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : p.block(b)) w = dist(rng);
  }
  return p;
}

std::vector<double> rnn_cell_step(const NetParams& params, double t_k, double q_k,
                                  std::span<const double> h_prev) {
  const NetDims& d = params.dims();
  if (h_prev.size() != d.d_h) throw ParameterError("hidden state has the wrong width");
  std::vector<double> y(2 + d.d_h);
  y[0] = t_k;
  y[1] = q_k;
  std::copy(h_prev.begin(), h_prev.end(), y.begin() + 2);
  std::vector<double> h(d.d_h);
  simd::affine(params.block(Block::w_h), d.d_h, 2 + d.d_h, y, params.block(Block::b_h), h);
  for (double& v : h) v = std::tanh(v);
  return h;
}

double head_forward(const NetParams& params, double x, std::span<const double> h_k) {
  const NetDims& d = params.dims();
  if (h_k.size() != d.d_h) throw ParameterError("hidden state has the wrong width");
  std::vector<double> in(1 + d.d_h);
  in[0] = x;
  std::copy(h_k.begin(), h_k.end(), in.begin() + 1);
  std::vector<double> z1(d.d_1), z2(d.d_2);
  simd::affine(params.block(Block::w_1), d.d_1, 1 + d.d_h, in, params.block(Block::b_1), z1);
  for (double& v : z1) v = sigmoid(v);
  simd::affine(params.block(Block::w_2), d.d_2, d.d_1, z1, params.block(Block::b_2), z2);
  for (double& v : z2) v = sigmoid(v);
  return simd::dot(params.block(Block::w_3), z2) + params.block(Block::b_3)[0];
}

ForwardRecord record_forward(const NetParams& params, const GridSpec& grid,
                             const SupplyPath& path) {
  if (path.values.size() != grid.ext_t()) {
    throw ParameterError("supply path has " + std::to_string(path.values.size()) +
                         " levels, extended grid has " + std::to_string(grid.ext_t()));
  }
  const NetDims& d = params.dims();
  const std::size_t nk = grid.ext_t();
  const std::size_t ni = grid.ext_x();
  const std::size_t in_h = 2 + d.d_h;

  ForwardRecord rec;
  rec.grid = grid;
  rec.dims = d;
  rec.inputs.assign(nk * in_h, 0.0);
  rec.hidden.assign(nk * d.d_h, 0.0);
  rec.z1.assign(nk * ni * d.d_1, 0.0);
  rec.z2.assign(nk * ni * d.d_2, 0.0);
  Array2 phi(nk, ni);

  const auto w_h = params.block(Block::w_h);
  const auto b_h = params.block(Block::b_h);
  const auto w_1 = params.block(Block::w_1);
  const auto b_1 = params.block(Block::b_1);
  const auto w_2 = params.block(Block::w_2);
  const auto b_2 = params.block(Block::b_2);
  const auto w_3 = params.block(Block::w_3);
  const double b_3 = params.block(Block::b_3)[0];

  // The x-column of W1 is applied per point; the h-columns once per level.
  std::vector<double> w1_x(d.d_1);
  for (std::size_t r = 0; r < d.d_1; ++r) w1_x[r] = w_1[r * (1 + d.d_h)];
  std::vector<double> head_in(1 + d.d_h, 0.0);
  std::vector<double> base(d.d_1);

  for (std::size_t k = 0; k < nk; ++k) {
    std::span<double> y(rec.inputs.data() + k * in_h, in_h);
    std::span<double> h(rec.hidden.data() + k * d.d_h, d.d_h);
    y[0] = grid.time(k);
    y[1] = path.values[k];
    if (k > 0) {
      std::copy_n(rec.hidden.data() + (k - 1) * d.d_h, d.d_h, y.begin() + 2);
    }
    simd::affine(w_h, d.d_h, in_h, y, b_h, h);
    for (double& v : h) v = std::tanh(v);
    check_finite(h, at("hidden", k));

    std::copy(h.begin(), h.end(), head_in.begin() + 1);
    simd::affine(w_1, d.d_1, 1 + d.d_h, head_in, b_1, base);

    for (std::size_t i = 0; i < ni; ++i) {
      const double x = grid.space(i);
      std::span<double> z1(rec.z1.data() + (k * ni + i) * d.d_1, d.d_1);
      std::span<double> z2(rec.z2.data() + (k * ni + i) * d.d_2, d.d_2);
      for (std::size_t r = 0; r < d.d_1; ++r) z1[r] = sigmoid(base[r] + w1_x[r] * x);
      simd::affine(w_2, d.d_2, d.d_1, z1, b_2, z2);
      for (double& v : z2) v = sigmoid(v);
      phi(k, i) = simd::dot(w_3, z2) + b_3;
      if (!std::isfinite(phi(k, i))) {
        throw NumericError(at("phi", k, i), "non-finite value at " + at("phi", k, i));
      }
    }
  }
  rec.field = PotentialField(grid, std::move(phi));
  return rec;
}

PotentialField forward_field(const NetParams& params, const GridSpec& grid,
                             const SupplyPath& path) {
  return record_forward(params, grid, path).field;
}

GradientAccumulator backward(const NetParams& params, const ForwardRecord& rec,
                             const Array2& dphi) {
  const NetDims& d = params.dims();
  if (!(rec.dims == d)) throw ParameterError("forward record was made with other dimensions");
  const GridSpec& grid = rec.grid;
  const std::size_t nk = grid.ext_t();
  const std::size_t ni = grid.ext_x();
  if (dphi.rows() != nk || dphi.cols() != ni) {
    throw ParameterError("loss gradient does not match the extended grid");
  }
  const std::size_t in_h = 2 + d.d_h;
  const std::size_t in_1 = 1 + d.d_h;

  GradientAccumulator g(d);
  auto gw_h = g.block(Block::w_h);
  auto gb_h = g.block(Block::b_h);
  auto gw_1 = g.block(Block::w_1);
  auto gb_1 = g.block(Block::b_1);
  auto gw_2 = g.block(Block::w_2);
  auto gb_2 = g.block(Block::b_2);
  auto gw_3 = g.block(Block::w_3);
  auto gb_3 = g.block(Block::b_3);

  const auto w_h = params.block(Block::w_h);
  const auto w_1 = params.block(Block::w_1);
  const auto w_2 = params.block(Block::w_2);
  const auto w_3 = params.block(Block::w_3);

  std::vector<double> da2(d.d_2), dz1(d.d_1), da1_sum(d.d_1), gw1_x(d.d_1, 0.0);
  std::vector<double> head_in(in_1, 0.0), dhead_in(in_1);
  std::vector<double> dh_head(nk * d.d_h, 0.0);

  for (std::size_t k = 0; k < nk; ++k) {
    std::fill(da1_sum.begin(), da1_sum.end(), 0.0);
    for (std::size_t i = 0; i < ni; ++i) {
      const double up = dphi(k, i);
      if (!std::isfinite(up)) {
        throw NumericError(at("dloss/dphi", k, i), "non-finite upstream gradient at " +
                                                       at("dloss/dphi", k, i));
      }
      const double x = grid.space(i);
      std::span<const double> z1(rec.z1.data() + (k * ni + i) * d.d_1, d.d_1);
      std::span<const double> z2(rec.z2.data() + (k * ni + i) * d.d_2, d.d_2);

      simd::axpy(up, z2, gw_3);
      gb_3[0] += up;
      for (std::size_t r = 0; r < d.d_2; ++r) da2[r] = up * w_3[r] * z2[r] * (1.0 - z2[r]);
      simd::outer_acc(gw_2, d.d_2, d.d_1, da2, z1);
      for (std::size_t r = 0; r < d.d_2; ++r) gb_2[r] += da2[r];
      std::fill(dz1.begin(), dz1.end(), 0.0);
      simd::gemv_t_acc(w_2, d.d_2, d.d_1, da2, dz1);
      for (std::size_t r = 0; r < d.d_1; ++r) {
        const double da1 = dz1[r] * z1[r] * (1.0 - z1[r]);
        da1_sum[r] += da1;
        gw1_x[r] += da1 * x;
      }
    }
    std::span<const double> h(rec.hidden.data() + k * d.d_h, d.d_h);
    head_in[0] = 0.0;
    std::copy(h.begin(), h.end(), head_in.begin() + 1);
    simd::outer_acc(gw_1, d.d_1, in_1, da1_sum, head_in);
    for (std::size_t r = 0; r < d.d_1; ++r) gb_1[r] += da1_sum[r];
    std::fill(dhead_in.begin(), dhead_in.end(), 0.0);
    simd::gemv_t_acc(w_1, d.d_1, in_1, da1_sum, dhead_in);
    std::copy(dhead_in.begin() + 1, dhead_in.end(), dh_head.begin() + k * d.d_h);
  }
  for (std::size_t r = 0; r < d.d_1; ++r) gw_1[r * in_1] += gw1_x[r];

  // Backpropagation through time.
  std::vector<double> carry(d.d_h, 0.0), da(d.d_h), dy(in_h);
  for (std::size_t kk = nk; kk-- > 0;) {
    std::span<const double> h(rec.hidden.data() + kk * d.d_h, d.d_h);
    std::span<const double> y(rec.inputs.data() + kk * in_h, in_h);
    for (std::size_t r = 0; r < d.d_h; ++r) {
      da[r] = (dh_head[kk * d.d_h + r] + carry[r]) * (1.0 - h[r] * h[r]);
    }
    check_finite(da, at("dloss/dhidden", kk));
    simd::outer_acc(gw_h, d.d_h, in_h, da, y);
    for (std::size_t r = 0; r < d.d_h; ++r) gb_h[r] += da[r];
    std::fill(dy.begin(), dy.end(), 0.0);
    simd::gemv_t_acc(w_h, d.d_h, in_h, da, dy);
    std::copy(dy.begin() + 2, dy.end(), carry.begin());
  }

  for (std::size_t b = 0; b < kBlockCount; ++b) {
    check_finite(g.block(static_cast<Block>(b)),
                 std::string("grad ") + block_name(static_cast<Block>(b)));
  }
  return g;
}

}  // namespace mfgp
