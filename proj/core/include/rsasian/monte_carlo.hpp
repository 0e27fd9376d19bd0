#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rsasian/model.hpp"
#include "rsasian/philox.hpp"

namespace rsasian {

/// How the starting regime is chosen.
///  - kGiven: the regime of the MarketState.
///  - kStationary: drawn per path from the stationary law of the chain.
enum class StartLaw { kGiven, kStationary };

struct McConfig {
  std::size_t n_paths = 100000;
  std::size_t n_steps = 252;  // averaging steps per year
  std::uint64_t seed = 20240611;
  bool antithetic = true;
  StartLaw start = StartLaw::kGiven;
};

void validate_mc_config(const McConfig& cfg);

struct McEstimate {
  double price;
  double std_error;
  std::size_t n_paths;
};

struct ChainSegment {
  std::size_t regime;
  double entry_time;
};

/// Holding-time construction of the regime path on [t0, T] started in `regime`.
std::vector<ChainSegment> simulate_chain(const RegimeModel& model, std::size_t regime, double t0,
                                         double T, PathStream& rng);

/// Stationary distribution pi with pi Q = 0, sum pi = 1.
std::vector<double> stationary_distribution(const RegimeModel& model);

McEstimate mc_price(const AsianOptionSpec& spec, const MarketState& state,
                    const RegimeModel& model, const McConfig& cfg);

}  // namespace rsasian
