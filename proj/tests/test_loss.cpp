#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "mfgp/density.hpp"
#include "mfgp/error.hpp"
#include "mfgp/loss.hpp"
#include "support.hpp"

using namespace mfgp;
using doctest::Approx;

namespace {

const GridSpec kBench = test::bench_grid();

PotentialField zero_field(const GridSpec& g) {
  return test::field_from(g, [](double, double) { return 0.0; });
}

}  // namespace

TEST_CASE("phi = 0 identities on the benchmark grid") {
  const PotentialField f = zero_field(kBench);
  const SupplyPath path = deterministic_supply(test::bench_supply(), kBench);
  const LossSetup setup;
  CHECK(loss_variational(f, setup.model, setup.eps) == 0.0);
  CHECK(loss_positivity(f) == 0.0);
  CHECK(loss_probability(f) == 17.0);
  // Direct summation of (1 - 1.5 e^{-2 t_k})^2 over the 17 levels.
  CHECK(loss_balance(f, path) == Approx(4.544763070058032).epsilon(1e-13));
  // Direct summation of M0(x_i)^2 over the 31 points.
  CHECK(loss_initial(f, setup.density) == Approx(16.87666654019814).epsilon(1e-13));

  const LossBreakdown all = loss_total(f, path, setup);
  CHECK(all.total == Approx(17.0 + 4.544763070058032 + 16.87666654019814).epsilon(1e-13));
}

TEST_CASE("positivity hinge count") {
  const GridSpec g = build_grid(1.0, 2, 0.0, 1.0, 2);
  const auto f = test::field_from(g, [](double, double x) { return -x; });
  CHECK(loss_positivity(f) == 4.0);
  const auto up = test::field_from(g, [](double, double x) { return 3.0 * x; });
  CHECK(loss_positivity(up) == 0.0);
}

TEST_CASE("initial-condition offsets") {
  const InitialDensity d;
  const auto exact = test::field_from(kBench, [&](double, double x) { return initial_cumulative(d, x); });
  CHECK(loss_initial(exact, d) == 0.0);
  const auto shifted =
      test::field_from(kBench, [&](double, double x) { return initial_cumulative(d, x) + 0.1; });
  CHECK(loss_initial(shifted, d) == Approx(0.31).epsilon(1e-13));
}

TEST_CASE("balance is invariant under space-constant shifts") {
  const SupplyPath path = deterministic_supply(test::bench_supply(), kBench);
  auto base = [](double t, double x) { return 0.3 * std::sin(2.0 * x + t) + t * x; };
  const auto f = test::field_from(kBench, base);
  const auto g = test::field_from(kBench, [&](double t, double x) { return base(t, x) + 0.77; });
  CHECK(loss_balance(g, path) == Approx(loss_balance(f, path)).epsilon(1e-12));
  CHECK(loss_probability(g) == Approx(loss_probability(f)).epsilon(1e-12));
}

TEST_CASE("total is the weighted sum of the terms") {
  const SupplyPath path = deterministic_supply(test::bench_supply(), kBench);
  const auto f = test::field_from(kBench, [](double t, double x) { return 0.5 * (x + 1.0) - 0.1 * t * x; });
  LossSetup setup;
  setup.weights = LossWeights{2.0, 3.0, 0.5, 0.25, 4.0};
  const LossBreakdown l = loss_total(f, path, setup);
  CHECK(l.l_v == loss_variational(f, setup.model, setup.eps));
  CHECK(l.l_0 == loss_positivity(f));
  CHECK(l.l_b == loss_balance(f, path));
  CHECK(l.l_m0 == loss_initial(f, setup.density));
  CHECK(l.l_p == loss_probability(f));
  CHECK(l.total == Approx(2.0 * l.l_v + 3.0 * l.l_0 + 0.5 * l.l_b + 0.25 * l.l_m0 + 4.0 * l.l_p));
}

TEST_CASE("variational term for a uniformly translating linear ramp") {
  // phi = (x - q t + 1)/2 on [-1, 1]: m = 1/2, j = q/2, F = q^2/4 per point.
  const GridSpec g = build_grid(1.0, 9, -1.0, 1.0, 11);
  const double q = 0.4;
  const auto f = test::field_from(g, [&](double t, double x) { return 0.5 * (x - q * t + 1.0); });
  const double expected = g.h_t * g.h_x * 9 * 11 * q * q / 4.0;
  CHECK(loss_variational(f, LagrangianModel{}, 1e-6) == Approx(expected).epsilon(1e-12));
}

TEST_CASE("loss gradient matches central differences in phi") {
  const GridSpec g = build_grid(1.0, 4, -1.0, 1.0, 6);
  SupplyParams s = test::bench_supply();
  s.sigma = 0.2;
  auto rng = seeded_engine(3, kTrainStream, 1);
  const SupplyPath path = sample_ou_path(s, g, rng);
  std::mt19937_64 gen(5);
  // Noise small enough that every dx stays positive, away from the clamp.
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  Array2 phi(g.ext_t(), g.ext_x());
  for (std::size_t k = 0; k < g.ext_t(); ++k)
    for (std::size_t i = 0; i < g.ext_x(); ++i) phi(k, i) = 0.15 * static_cast<double>(i) + u(gen);
  LossSetup setup;
  LagrangianModel with_cost;
  with_cost.terminal_cost_slope = [](double x) { return 0.3 * x; };
  setup.model = with_cost;

  const LossEvaluation ev = loss_with_gradient(PotentialField(g, phi), path, setup);
  CHECK(ev.terms == loss_total(PotentialField(g, phi), path, setup));
  const double h = 1e-6;
  for (std::size_t q = 0; q < phi.flat().size(); ++q) {
    Array2 up = phi, dn = phi;
    up.flat()[q] += h;
    dn.flat()[q] -= h;
    const double fd = (loss_total(PotentialField(g, up), path, setup).total -
                       loss_total(PotentialField(g, dn), path, setup).total) / (2.0 * h);
    CHECK(test::rel_err(ev.dphi.flat()[q], fd, 1e-3) <= 1e-6);
  }
}

TEST_CASE("loss CSV row format") {
  std::ostringstream os;
  write_loss_csv_header(os);
  os << '\n';
  write_loss_csv_row(os, 7, LossBreakdown{0.125, 0.0, 1.0 / 3.0, 2.0, 1e-10, 2.5});
  CHECK(os.str() == "step,l_v,l_0,l_b,l_m0,l_p,total\n7,0.125,0,0.333333333,2,1e-10,2.5");
}
