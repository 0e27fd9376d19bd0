#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "rsasian/error.hpp"
#include "rsasian/monte_carlo.hpp"
#include "support.hpp"

using namespace rsasian;

namespace {

AsianOptionSpec european(double K) {
  AsianOptionSpec s;
  s.style = OptionStyle::kEuropeanPut;
  s.K = K;
  return s;
}

}  // namespace

TEST(MonteCarlo, SingleRegimeEuropeanMatchesBlackScholes) {
  const RegimeModel m = testing_support::single_regime(0.05, 0.2);
  McConfig cfg;
  cfg.n_paths = 100000;
  const McEstimate est = mc_price(european(100.0), {0.0, 100.0, 0.0, 0}, m, cfg);
  EXPECT_EQ(est.n_paths, 100000u);
  EXPECT_NEAR(est.price, testing_support::bs_put(100, 100, 1, 0.05, 0, 0.2), 3.0 * est.std_error);
}

TEST(MonteCarlo, EuropeanWithDividendAndLateStart) {
  const RegimeModel m =
      validate_model({{0.04, 0.04}, {0.3, 0.3}, {0.02, 0.02}, {{-2, 2}, {1, -1}}});
  McConfig cfg;
  cfg.n_paths = 100000;
  AsianOptionSpec spec = european(110.0);
  const McEstimate est = mc_price(spec, {0.4, 100.0, 30.0, 1}, m, cfg);
  EXPECT_NEAR(est.price, testing_support::bs_put(100, 110, 0.6, 0.04, 0.02, 0.3),
              3.5 * est.std_error);
}

TEST(MonteCarlo, DeterministicAverageWithTinyVolatility) {
  const double r = 0.05;
  const RegimeModel m = testing_support::single_regime(r, 1e-6);
  AsianOptionSpec spec;
  spec.style = OptionStyle::kFixedCall;
  spec.K = 95.0;
  McConfig cfg;
  cfg.n_paths = 64;
  const double avg = 100.0 * std::expm1(r) / r;
  EXPECT_NEAR(mc_price(spec, {0.0, 100.0, 0.0, 0}, m, cfg).price, std::exp(-r) * (avg - 95.0),
              1e-4);
}

TEST(MonteCarlo, ReproducibleAndIndependentOfThreadCount) {
  const RegimeModel m = testing_support::desk_model();
  AsianOptionSpec spec;
  McConfig cfg;
  cfg.n_paths = 20000;
  cfg.n_steps = 50;
  setenv("PRICER_THREADS", "1", 1);
  const McEstimate a = mc_price(spec, {0.0, 100.0, 0.0, 0}, m, cfg);
  setenv("PRICER_THREADS", "3", 1);
  const McEstimate b = mc_price(spec, {0.0, 100.0, 0.0, 0}, m, cfg);
  unsetenv("PRICER_THREADS");
  EXPECT_EQ(a.price, b.price);
  EXPECT_EQ(a.std_error, b.std_error);
  cfg.seed += 1;
  EXPECT_NE(mc_price(spec, {0.0, 100.0, 0.0, 0}, m, cfg).price, a.price);
}

TEST(MonteCarlo, HomogeneousInSpotAndAverage) {
  const RegimeModel m = testing_support::desk_model();
  AsianOptionSpec spec;
  McConfig cfg;
  cfg.n_paths = 20000;
  cfg.n_steps = 50;
  const MarketState base{0.3, 100.0, 27.0, 1};
  const double p = mc_price(spec, base, m, cfg).price;
  for (double c : {0.5, 2.0}) {
    const double scaled = mc_price(spec, {0.3, c * 100.0, c * 27.0, 1}, m, cfg).price;
    EXPECT_NEAR(scaled, c * p, 1e-10 * c * p);
  }
}

TEST(MonteCarlo, StationaryDistribution) {
  const RegimeModel m = validate_model({{0.05, 0.03}, {0.3, 0.2}, {}, {{-1, 1}, {3, -3}}});
  const auto pi = stationary_distribution(m);
  EXPECT_NEAR(pi[0], 0.75, 1e-14);
  EXPECT_NEAR(pi[1], 0.25, 1e-14);
  const RegimeModel frozen = testing_support::single_regime(0.05, 0.2);
  EXPECT_THROW(stationary_distribution(frozen), Error);
}

TEST(MonteCarlo, ExitRateLawOfLargeNumbers) {
  const RegimeModel m = validate_model({{0.05, 0.03}, {0.3, 0.2}, {}, {{-5, 5}, {2, -2}}});
  const Philox4x32 gen(99);
  const std::size_t n = 100000;
  // Exits from state 0 per unit time spent in state 0.
  double exits = 0.0, occupied = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    PathStream rng(gen, p, 0);
    const auto path = simulate_chain(m, 0, 0.0, 10.0, rng);
    double e = 0.0, occ = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const double end = k + 1 < path.size() ? path[k + 1].entry_time : 10.0;
      if (path[k].regime == 0) {
        occ += end - path[k].entry_time;
        if (k + 1 < path.size()) e += 1.0;
      }
    }
    exits += e;
    occupied += occ;
  }
  const double rate = exits / occupied;
  // Poisson counting: sd of the rate is about sqrt(exits) / occupied.
  EXPECT_NEAR(rate, 5.0, 3.0 * std::sqrt(exits) / occupied);
}

TEST(MonteCarlo, ExpiryReturnsPayoff) {
  const RegimeModel m = testing_support::desk_model();
  AsianOptionSpec spec;
  const McEstimate est = mc_price(spec, {1.0, 90.0, 100.0, 0}, m, {});
  EXPECT_EQ(est.price, 10.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(MonteCarlo, StationaryStartMixesRegimePrices) {
  const RegimeModel m = testing_support::desk_model();
  AsianOptionSpec spec = european(100.0);
  McConfig cfg;
  cfg.n_paths = 100000;
  const double p0 = mc_price(spec, {0.0, 100.0, 0.0, 0}, m, cfg).price;
  const double p1 = mc_price(spec, {0.0, 100.0, 0.0, 1}, m, cfg).price;
  cfg.start = StartLaw::kStationary;
  const McEstimate mix = mc_price(spec, {0.0, 100.0, 0.0, 0}, m, cfg);
  EXPECT_NEAR(mix.price, 0.5 * (p0 + p1), 4.0 * mix.std_error);
}

TEST(MonteCarlo, ConfigValidation) {
  McConfig cfg;
  cfg.n_paths = 0;
  EXPECT_THROW(validate_mc_config(cfg), Error);
  cfg = {};
  cfg.n_steps = 0;
  EXPECT_THROW(validate_mc_config(cfg), Error);
}
