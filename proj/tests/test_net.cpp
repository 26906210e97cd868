#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mfgp/adam.hpp"
#include "mfgp/error.hpp"
#include "mfgp/loss.hpp"
#include "mfgp/net.hpp"
#include "support.hpp"

using namespace mfgp;
using doctest::Approx;

namespace {

NetParams zero_params(const NetDims& d) { return NetParams(d); }

}  // namespace

TEST_CASE("init_params is deterministic and Glorot-bounded") {
  const NetDims d{32, 32, 32};
  const NetParams a = init_params(d, 0);
  const NetParams b = init_params(d, 0);
  CHECK(a == b);
  CHECK(a != init_params(d, 1));
  CHECK(parameter_count(d) == 32 * 34 + 32 + 32 * 33 + 32 + 32 * 32 + 32 + 32 + 1);
  for (std::size_t bi = 0; bi < kBlockCount; ++bi) {
    const auto blk = static_cast<Block>(bi);
    const BlockShape s = block_shape(d, blk);
    const bool bias = bi % 2 == 1;
    const double bound = std::sqrt(6.0 / static_cast<double>(s.rows + s.cols));
    for (double v : a.block(blk)) {
      if (bias) CHECK(v == 0.0);
      else CHECK(std::abs(v) <= bound);
    }
  }
  // w_h is 32 x 34: bound sqrt(6/66).
  CHECK(std::sqrt(6.0 / 66.0) == Approx(0.30151134457776363));
}

TEST_CASE("rnn_cell_step examples") {
  const NetDims d{3, 2, 2};
  const NetParams z = zero_params(d);
  const std::vector<double> h{0.4, -0.9, 0.1};
  for (double v : rnn_cell_step(z, 0.3, -0.7, h)) CHECK(v == 0.0);

  NetParams toy(NetDims{1, 1, 1});
  auto wh = toy.block(Block::w_h);
  wh[0] = 1.0;
  wh[1] = 1.0;
  wh[2] = 0.0;
  const std::vector<double> h1{123.0};
  CHECK(rnn_cell_step(toy, 0.5, 0.5, h1)[0] == Approx(0.7615941559557649).epsilon(1e-15));

  // Open interval on the reachable input range; tanh rounds to +-1 in double
  // only past |z| ~ 19.
  const NetParams r = init_params(d, 4);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 1000; ++n) {
    const std::vector<double> hp{u(rng), u(rng), u(rng)};
    for (double v : rnn_cell_step(r, 0.5 * (u(rng) + 1.0), 2.0 * u(rng), hp)) {
      CHECK(v > -1.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("head_forward examples") {
  const NetDims d{2, 3, 3};
  NetParams p = zero_params(d);
  const std::vector<double> h{0.5, -0.5};
  CHECK(head_forward(p, 0.3, h) == 0.0);
  p.block(Block::b_3)[0] = 0.7;
  CHECK(head_forward(p, 0.3, h) == 0.7);

  NetParams toy(NetDims{1, 1, 1});
  toy.block(Block::w_1)[0] = 1.0;
  toy.block(Block::w_2)[0] = 1.0;
  toy.block(Block::w_3)[0] = 1.0;
  const std::vector<double> h0{0.0};
  CHECK(head_forward(toy, 0.0, h0) == Approx(0.6224593312018546).epsilon(1e-15));
}

TEST_CASE("forward_field shape and zero parameters") {
  const GridSpec g = test::bench_grid();
  const SupplyPath path = deterministic_supply(test::bench_supply(), g);
  const PotentialField f = forward_field(zero_params(NetDims{}), g, path);
  CHECK(f.phi().rows() == 18);
  CHECK(f.phi().cols() == 32);
  for (double v : f.phi().flat()) CHECK(v == 0.0);
  for (double v : f.dt().flat()) CHECK(v == 0.0);
  for (double v : f.dx().flat()) CHECK(v == 0.0);

  SupplyPath bad{std::vector<double>(5, 0.0)};
  CHECK_THROWS_AS(forward_field(zero_params(NetDims{}), g, bad), ParameterError);
}

TEST_CASE("record_forward agrees with the per-node reference functions") {
  const GridSpec g = build_grid(1.0, 4, -1.0, 1.0, 5);
  const SupplyPath path = deterministic_supply(test::bench_supply(), g);
  const NetDims d{5, 4, 3};
  NetParams p = init_params(d, 9);
  for (double& b : p.flat()) b += 0.01;  // nonzero biases
  const PotentialField f = forward_field(p, g, path);
  std::vector<double> h(d.d_h, 0.0);
  for (std::size_t k = 0; k < g.ext_t(); ++k) {
    h = rnn_cell_step(p, g.time(k), path.values[k], h);
    for (std::size_t i = 0; i < g.ext_x(); ++i)
      CHECK(f.phi()(k, i) == Approx(head_forward(p, g.space(i), h)).epsilon(1e-13));
  }
}

TEST_CASE("backward: constant-head example") {
  const NetDims d{3, 2, 4};
  const NetParams p = zero_params(d);
  const GridSpec g = build_grid(1.0, 3, 0.0, 1.0, 3);
  const SupplyPath path = deterministic_supply(test::bench_supply(), g);
  const ForwardRecord rec = record_forward(p, g, path);
  Array2 dphi(g.ext_t(), g.ext_x());
  dphi(1, 1) = 1.0;
  const GradientAccumulator grad = backward(p, rec, dphi);
  CHECK(grad.block(Block::b_3)[0] == 1.0);
  for (double v : grad.block(Block::w_3)) CHECK(v == 0.5);
  for (auto b : {Block::w_h, Block::b_h, Block::w_1, Block::b_1, Block::w_2, Block::b_2})
    for (double v : grad.block(b)) CHECK(v == 0.0);
}

TEST_CASE("backward: severed recurrence gives zero block") {
  // W1's hidden columns zero means phi does not depend on the RNN at all.
  const NetDims d{3, 4, 4};
  NetParams p = init_params(d, 2);
  const auto w1 = p.block(Block::w_1);
  for (std::size_t r = 0; r < d.d_1; ++r)
    for (std::size_t c = 1; c < 1 + d.d_h; ++c) w1[r * (1 + d.d_h) + c] = 0.0;
  const GridSpec g = build_grid(1.0, 3, -1.0, 1.0, 4);
  const SupplyPath path = deterministic_supply(test::bench_supply(), g);
  const ForwardRecord rec = record_forward(p, g, path);
  const LossEvaluation ev = loss_with_gradient(rec.field, path, LossSetup{});
  const GradientAccumulator grad = backward(p, rec, ev.dphi);
  for (double v : grad.block(Block::w_h)) CHECK(v == 0.0);
  for (double v : grad.block(Block::b_h)) CHECK(v == 0.0);
}

TEST_CASE("backward matches finite differences on random small problems") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int c = 0; c < 24; ++c) {
    std::uniform_int_distribution<int> dim(1, 4), nt(2, 4), nx(2, 5);
    const NetDims d{static_cast<std::size_t>(dim(rng)), static_cast<std::size_t>(dim(rng)),
                    static_cast<std::size_t>(dim(rng))};
    const GridSpec g = build_grid(1.0, static_cast<std::size_t>(nt(rng)), -1.0, 1.0,
                                  static_cast<std::size_t>(nx(rng)));
    SupplyParams s = test::bench_supply();
    s.sigma = 0.3;
    auto path_rng = seeded_engine(7, kTrainStream, static_cast<std::uint64_t>(c));
    const SupplyPath path = sample_ou_path(s, g, path_rng);
    NetParams p = init_params(d, static_cast<std::uint64_t>(100 + c));
    std::normal_distribution<double> jitter(0.0, 0.3);
    for (double& v : p.flat()) v += jitter(rng);
    LossSetup setup;
    setup.eps = 1e-2;

    const ForwardRecord rec = record_forward(p, g, path);
    const LossEvaluation ev = loss_with_gradient(rec.field, path, setup);
    const GradientAccumulator grad = backward(p, rec, ev.dphi);
    const auto fd = test::fd_param_gradient(p, g, path, setup, 1e-5);
    for (std::size_t q = 0; q < fd.size(); ++q) {
      const double e = test::rel_err(grad.flat()[q], fd[q], 1e-2);
      worst = std::max(worst, e);
      CHECK_MESSAGE(e <= 1e-5, "case " << c << " param " << q << ": " << grad.flat()[q]
                                        << " vs " << fd[q]);
    }
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("causality: prefix-equal paths give bitwise-equal prefix fields") {
  const GridSpec g = test::bench_grid();
  const NetParams p = init_params(NetDims{8, 8, 8}, 3);
  SupplyParams s = test::bench_supply();
  s.sigma = 0.2;
  auto rng = seeded_engine(1, kTrainStream, 0);
  const SupplyPath a = sample_ou_path(s, g, rng);
  SupplyPath b = a;
  for (std::size_t k = 9; k < b.values.size(); ++k) b.values[k] += 0.25;
  const PotentialField fa = forward_field(p, g, a), fb = forward_field(p, g, b);
  for (std::size_t k = 0; k < 9; ++k)
    for (std::size_t i = 0; i < g.ext_x(); ++i) CHECK(fa.phi()(k, i) == fb.phi()(k, i));
  bool differs = false;
  for (std::size_t i = 0; i < g.ext_x(); ++i) differs |= fa.phi()(9, i) != fb.phi()(9, i);
  CHECK(differs);
}

TEST_CASE("non-finite intermediate is reported by node") {
  const NetDims d{2, 2, 2};
  NetParams p = init_params(d, 1);
  p.block(Block::b_3)[0] = std::numeric_limits<double>::infinity();
  const GridSpec g = build_grid(1.0, 2, 0.0, 1.0, 2);
  const SupplyPath path = deterministic_supply(test::bench_supply(), g);
  try {
    (void)forward_field(p, g, path);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("phi[k=0,i=0]") != std::string::npos);
  }
}

TEST_CASE("adam examples") {
  std::vector<double> x{0.0};
  const std::vector<double> g{1.0};
  AdamState st(AdamHyper{}, 1);
  adam_update(x, g, st);
  CHECK(x[0] == Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-14));
  CHECK(st.step_count == 1);

  std::vector<double> y{0.3, -2.0};
  const std::vector<double> zero{0.0, 0.0};
  AdamState s2(AdamHyper{}, 2);
  adam_update(y, zero, s2);
  CHECK(y == std::vector<double>{0.3, -2.0});
  CHECK(s2.step_count == 1);

  // Two identical trajectories.
  NetParams p1 = init_params(NetDims{3, 3, 3}, 5), p2 = p1;
  AdamState a1(AdamHyper{}, p1.flat().size()), a2 = a1;
  const GridSpec grid = build_grid(1.0, 3, -1.0, 1.0, 4);
  const SupplyPath path = deterministic_supply(test::bench_supply(), grid);
  for (int n = 0; n < 5; ++n) {
    for (auto* pa : {&p1, &p2}) {
      auto& st_ref = pa == &p1 ? a1 : a2;
      const ForwardRecord rec = record_forward(*pa, grid, path);
      const auto ev = loss_with_gradient(rec.field, path, LossSetup{});
      adam_step(*pa, backward(*pa, rec, ev.dphi), st_ref);
    }
  }
  CHECK(p1 == p2);
  CHECK(a1 == a2);

  std::vector<double> short_g{1.0, 2.0};
  CHECK_THROWS_AS(adam_update(x, short_g, st), ParameterError);
}
