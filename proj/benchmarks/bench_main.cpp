#include <benchmark/benchmark.h>

#include "rsasian/european_rs.hpp"
#include "rsasian/finite_difference.hpp"
#include "rsasian/ham.hpp"
#include "rsasian/monte_carlo.hpp"

using namespace rsasian;

namespace {

RegimeModel desk() {
  return validate_model({{0.05, 0.03}, {0.3, 0.2}, {}, {{-1.0, 1.0}, {1.0, -1.0}}});
}

RegimeModel shared_rate() {
  return validate_model({{0.05, 0.05}, {0.3, 0.2}, {}, {{-1.0, 1.0}, {1.0, -1.0}}});
}

void BM_EuropeanTransform(benchmark::State& state) {
  const RegimeModel m = desk();
  for (auto _ : state) {
    benchmark::DoNotOptimize(price_european_put_rs(m, 95.0, 100.0, 0.0, 1.0, 0).price);
  }
}
BENCHMARK(BM_EuropeanTransform)->Unit(benchmark::kMillisecond);

void BM_EuropeanClosedForm(benchmark::State& state) {
  const RegimeModel m = shared_rate();
  QuadratureSpec q;
  q.n_rho = static_cast<std::size_t>(state.range(0));
  EuropeanOptions o;
  o.route = EuropeanRoute::kClosedForm;
  o.throw_on_tolerance = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(price_european_put_rs(m, 95.0, 100.0, 0.0, 1.0, 0, q, o).price);
  }
}
BENCHMARK(BM_EuropeanClosedForm)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_HamStep(benchmark::State& state) {
  const RegimeModel m = desk();
  HamConfig cfg;
  cfg.n_z = static_cast<std::size_t>(state.range(0));
  const HamGrid grid = make_ham_grid(cfg, 1.0);
  const TermGrid term0 = zeroth_term(m, grid, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(ham_step(term0, m, cfg).values[0](1, 1));
}
BENCHMARK(BM_HamStep)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_HamInitialGuess(benchmark::State& state) {
  const RegimeModel m = desk();
  const HamConfig cfg;
  const HamGrid grid = make_ham_grid(cfg, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(zeroth_term(m, grid, cfg).values[0](1, 1));
}
BENCHMARK(BM_HamInitialGuess)->Unit(benchmark::kMillisecond);

void BM_FiniteDifference(benchmark::State& state) {
  const RegimeModel m = desk();
  FdConfig cfg;
  cfg.n_y = cfg.n_t = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fd_value_at(fd_price(m, 1.0, cfg), 0, 0.0));
}
BENCHMARK(BM_FiniteDifference)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_MonteCarloFloatingPut(benchmark::State& state) {
  const RegimeModel m = desk();
  McConfig cfg;
  cfg.n_paths = 100000;
  cfg.n_steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_price({}, {0.0, 100.0, 0.0, 0}, m, cfg).price);
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_MonteCarloFloatingPut)->Arg(50)->Arg(252)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
