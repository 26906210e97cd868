#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "mfgp/error.hpp"
#include "mfgp/oracle.hpp"
#include "support.hpp"

using namespace mfgp;
using doctest::Approx;

namespace {

const GridSpec kBench = test::bench_grid();

SupplyPath constant_path(const GridSpec& g, double q) {
  return SupplyPath{std::vector<double>(g.ext_t(), q)};
}

}  // namespace

TEST_CASE("continuum objective by quadrature") {
  // 1/2 int_0^1 (1 - 1.5 e^{-2t})^2 dt in closed form.
  const double e2 = std::exp(-2.0), e4 = std::exp(-4.0);
  const double closed = 0.5 * (1.0 - 1.5 * (1.0 - e2) + 0.5625 * (1.0 - e4));
  CHECK(closed == Approx(0.12760018899000303).epsilon(1e-14));
  CHECK(std::abs(lq_objective_continuum(test::bench_supply(), 1.0) - closed) <= 1e-12);
  CHECK_THROWS_AS(lq_objective_continuum(test::bench_supply(), 1.0, 3), ParameterError);
}

TEST_CASE("analytic field: density, mass and zero penalty terms") {
  const SupplyPath path = deterministic_supply(test::bench_supply(), kBench);
  const InitialDensity d;
  const PotentialField f = analytic_potential_lq(kBench, path, d);
  CHECK(loss_positivity(f) == 0.0);
  CHECK(loss_initial(f, d) == 0.0);
  // All mass stays inside the window: each level sums to one exactly up to
  // rounding.
  CHECK(loss_probability(f) <= 1e-20);
  // Level sums of dt are the boundary flux, which the trapezoid X tracks only
  // to O(h_t).
  CHECK(loss_balance(f, path) <= 0.04);
  for (std::size_t k = 0; k < kBench.ext_t(); ++k) {
    CHECK(f.phi()(k, 0) == 0.0);
    CHECK(f.phi()(k, kBench.ext_x() - 1) == 1.0);
  }
}

TEST_CASE("analytic field leaves the window") {
  const GridSpec g = build_grid(1.0, 9, -1.0, 1.0, 21);
  CHECK_THROWS_AS(analytic_potential_lq(g, constant_path(g, 3.0), InitialDensity{}), DomainViolation);
  CHECK_THROWS_AS(analytic_potential_lq(g, constant_path(g, 0.0), InitialDensity{-0.8, 0.5}),
                  DomainViolation);
}

TEST_CASE("analytic price and constant supply") {
  const GridSpec g = build_grid(1.0, 9, -1.0, 1.0, 41);
  const SupplyPath path = constant_path(g, 0.3);
  const PricePath p = analytic_price(path, g);
  REQUIRE(p.values.size() == 9);
  for (double v : p.values) CHECK(v == -0.3);
  // A rigidly translating density: the mass-weighted quotient recovers -q up
  // to the stencil offset between the time and space differences.
  const PotentialField f = analytic_potential_lq(g, path, InitialDensity{-0.2, 0.5});
  for (double v : extract_price(f).values) CHECK(std::abs(v + 0.3) <= 1e-3);
}

TEST_CASE("extract_price on the benchmark tracks the half-step supply") {
  const SupplyPath path = deterministic_supply(test::bench_supply(), kBench);
  const PotentialField f = analytic_potential_lq(kBench, path, InitialDensity{});
  const PricePath p = extract_price(f);
  double err = 0.0;
  for (std::size_t k = 0; k < kBench.n_t; ++k) {
    const double t = kBench.time(k) + 0.5 * kBench.h_t;
    err = std::max(err, std::abs(p.values[k] + (1.0 - 1.5 * std::exp(-2.0 * t))));
  }
  CHECK(err <= 0.02);
}

TEST_CASE("stationary field") {
  const GridSpec g = build_grid(1.0, 5, -1.0, 1.0, 21);
  const PotentialField f = analytic_potential_lq(g, constant_path(g, 0.0), InitialDensity{});
  for (double v : extract_price(f).values) CHECK(v == 0.0);
  for (double v : extract_price(f, 1e-3, PriceRecovery::backward_integration).values)
    CHECK(v == Approx(0.0).epsilon(1e-12));
  const Array2 u = reconstruct_value_function(f);
  for (double v : u.flat()) CHECK(v == 0.0);
}

TEST_CASE("value function on the benchmark") {
  // Away from the swept support every w is the level mean and u(0, x) is a
  // midpoint sum of Q^2/2. Inside it, pointwise quotients at thin-mass edge
  // points carry an O(h / distance-to-edge) bias that only shrinks under
  // refinement.
  const double target = -0.12760018899000303;
  double prev_inside = 1e300;
  for (std::size_t r : {1u, 2u, 4u, 8u}) {
    const GridSpec g = build_grid(1.0, 16 * r + 1, -1.0, 1.0, 30 * r + 1);
    const SupplyPath path = deterministic_supply(test::bench_supply(), g);
    const Array2 u = reconstruct_value_function(analytic_potential_lq(g, path, InitialDensity{}));
    double inside = 0.0, outside = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
      CHECK(u(g.n_t - 1, i) == 0.0);
      const double e = std::abs(u(0, i) - target);
      if (g.space(i) < -0.75 || g.space(i) > 0.75) outside = std::max(outside, e);
      else inside = std::max(inside, e);
    }
    CHECK(outside <= 0.2 * g.h_t * g.h_t);
    CHECK(inside < prev_inside);
    prev_inside = inside;
  }
  CHECK(prev_inside <= 0.1);
}

TEST_CASE("backward-integration price converges on the benchmark") {
  // This mode differentiates w in x, so thin-mass edge points need a larger
  // threshold than the weighted-velocity default.
  double prev = 1e300;
  for (std::size_t r : {1u, 2u, 4u}) {
    const GridSpec g = build_grid(1.0, 16 * r + 1, -1.0, 1.0, 30 * r + 1);
    const SupplyPath path = deterministic_supply(test::bench_supply(), g);
    const PotentialField f = analytic_potential_lq(g, path, InitialDensity{});
    const PricePath b = extract_price(f, 0.2, PriceRecovery::backward_integration);
    double err = 0.0;
    for (std::size_t k = 0; k < g.n_t; ++k) {
      const double t = g.time(k) + 0.5 * g.h_t;
      err = std::max(err, std::abs(b.values[k] + (1.0 - 1.5 * std::exp(-2.0 * t))));
    }
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 0.005);
}

TEST_CASE("degenerate density") {
  const GridSpec g = build_grid(1.0, 3, -1.0, 1.0, 5);
  const auto flat = test::field_from(g, [](double, double) { return 0.5; });
  CHECK_THROWS_AS(extract_price(flat), DegenerateDensity);
  try {
    (void)extract_price(flat);
  } catch (const DegenerateDensity& e) {
    CHECK(e.level() == 0);
  }
}

TEST_CASE("evaluation of the analytic provider") {
  SupplyParams s = test::bench_supply();
  s.sigma = 0.2;
  const InitialDensity d;
  const FieldProvider provider = [&](const SupplyPath& p) {
    return analytic_potential_lq(kBench, p, d);
  };
  EvalOptions opt;
  opt.samples = 200;
  opt.seed = 11;
  opt.threads = 2;
  opt.reference = PriceReference::half_step;
  const EvalReport r = evaluate_stochastic(provider, s, kBench, LossSetup{}, opt);
  CHECK(r.count == 200);
  CHECK(r.failures == 0);
  CHECK(r.errors.size() == 200);
  CHECK(r.mean <= 0.02);
  CHECK(r.max >= r.mean);
  CHECK(r.seed == 11);

  opt.threads = 1;
  const EvalReport r1 = evaluate_stochastic(provider, s, kBench, LossSetup{}, opt);
  CHECK(r1.errors == r.errors);

  // Against Q_k itself the half-step offset theta (Q_bar - Q) h_t / 2 shows up.
  opt.reference = PriceReference::grid;
  const EvalReport rg = evaluate_stochastic(provider, s, kBench, LossSetup{}, opt);
  CHECK(rg.mean > r.mean);
  CHECK(rg.mean <= 0.15);

  opt.samples = 0;
  CHECK_THROWS_AS(evaluate_stochastic(provider, s, kBench, LossSetup{}, opt), ParameterError);
}

TEST_CASE("tabular solver smoke and divergence") {
  const GridSpec g = build_grid(1.0, 3, -1.0, 1.0, 3);
  const SupplyPath path = deterministic_supply(test::bench_supply(), g);
  TabularOptions o;
  o.steps = 500;
  const TabularResult r = tabular_solve(g, path, LossSetup{}, o);
  CHECK(r.best.total <= r.initial.total);

  o.learning_rate = 10.0;
  o.schedule = LrSchedule::constant;
  o.steps = 5000;
  const GridSpec big = test::bench_grid();
  const SupplyPath bp = deterministic_supply(test::bench_supply(), big);
  try {
    (void)tabular_solve(big, bp, LossSetup{}, o);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.step() > 0);
    MESSAGE("diverged at step " << e.step());
  }
}

TEST_CASE("price CSV") {
  const GridSpec g = build_grid(1.0, 2, 0.0, 1.0, 2);
  std::ostringstream os;
  write_price_csv(os, g, PricePath{{-0.5, 0.25}}, PricePath{{-0.5, 0.5}});
  CHECK(os.str() == "t,price_predicted,price_analytic,abs_error\n0,-0.5,-0.5,0\n1,0.25,0.5,0.25\n");
}
