#include "rsasian/monte_carlo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rsasian/error.hpp"
#include "rsasian/parallel.hpp"

namespace rsasian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kChunk = 2048;
constexpr std::uint32_t kChainStream = 0;
constexpr std::uint32_t kNormalStream = 1;

double holding_time(const RegimeModel& model, std::size_t regime, PathStream& rng) {
  const double rate = model.exit_rate(regime);
  return rate > 0.0 ? rng.exponential() / rate : kInf;
}

std::size_t next_regime(const RegimeModel& model, std::size_t regime, PathStream& rng) {
  const double target = rng.uniform() * model.exit_rate(regime);
  double cumulative = 0.0;
  std::size_t last = regime;
  for (std::size_t j = 0; j < model.n_states(); ++j) {
    if (j == regime || model.gen[regime][j] <= 0.0) continue;
    cumulative += model.gen[regime][j];
    last = j;
    if (target < cumulative) return j;
  }
  return last;
}

std::size_t sample_index(const std::vector<double>& probs, double u) {
  double cumulative = 0.0;
  for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
    cumulative += probs[j];
    if (u < cumulative) return j;
  }
  return probs.size() - 1;
}

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.n == 0.0) return;
    const double total = n + other.n;
    const double delta = other.mean - mean;
    mean += delta * other.n / total;
    m2 += other.m2 + delta * delta * n * other.n / total;
    n = total;
  }
};

struct PathContext {
  const AsianOptionSpec& spec;
  const MarketState& state;
  const RegimeModel& model;
  const McConfig& cfg;
  Philox4x32 gen;
  std::vector<double> start_law;
  std::size_t n_grid;
  bool averaging;
};

// Discounted payoff of one path, or the mean over an antithetic pair.
double simulate_unit(const PathContext& ctx, std::uint64_t index) {
  PathStream chain(ctx.gen, index, kChainStream);
  PathStream normals(ctx.gen, index, kNormalStream);
  const RegimeModel& model = ctx.model;
  const double T = ctx.spec.T;
  const double t0 = ctx.state.t;
  const double dt = (T - t0) / static_cast<double>(ctx.n_grid);

  std::size_t regime = ctx.cfg.start == StartLaw::kStationary
                           ? sample_index(ctx.start_law, chain.uniform())
                           : ctx.state.regime;
  double t = t0;
  double next_switch = t + holding_time(model, regime, chain);
  std::size_t k = 1;
  double next_grid = ctx.averaging ? (k == ctx.n_grid ? T : t0 + static_cast<double>(k) * dt)
                                   : kInf;
  double s[2] = {ctx.state.s, ctx.state.s};
  double area[2] = {ctx.state.a, ctx.state.a};
  double rate_integral = 0.0;
  const int copies = ctx.cfg.antithetic ? 2 : 1;

  while (t < T) {
    const double end = std::min({T, next_switch, next_grid});
    const double len = end - t;
    if (len > 0.0) {
      const double sig = model.sigma[regime];
      const double drift = (model.r[regime] - model.dividend(regime) - 0.5 * sig * sig) * len;
      const double shock = sig * std::sqrt(len) * normals.normal();
      for (int c = 0; c < copies; ++c) {
        const double next = s[c] * std::exp(drift + (c == 0 ? shock : -shock));
        area[c] += 0.5 * (s[c] + next) * len;
        s[c] = next;
      }
      rate_integral += model.r[regime] * len;
    }
    t = end;
    if (end == next_grid) {
      ++k;
      next_grid = k > ctx.n_grid ? kInf : (k == ctx.n_grid ? T : t0 + static_cast<double>(k) * dt);
    }
    if (end == next_switch && end < T) {
      regime = next_regime(model, regime, chain);
      next_switch = t + holding_time(model, regime, chain);
    }
  }
  const double discount = std::exp(-rate_integral);
  double total = 0.0;
  for (int c = 0; c < copies; ++c) total += ctx.spec.style == OptionStyle::kEuropeanPut
                                              ? payoff(ctx.spec, s[c], 0.0)
                                              : payoff(ctx.spec, s[c], area[c] / T);
  return discount * total / copies;
}

}  // namespace

void validate_mc_config(const McConfig& cfg) {
  if (cfg.n_paths < 1) throw Error(ErrorCode::kValidation, "n_paths not >= 1");
  if (cfg.n_steps < 1) throw Error(ErrorCode::kValidation, "n_steps not >= 1");
}

std::vector<ChainSegment> simulate_chain(const RegimeModel& model, std::size_t regime, double t0,
                                         double T, PathStream& rng) {
  std::vector<ChainSegment> path{{regime, t0}};
  double t = t0 + holding_time(model, regime, rng);
  while (t < T) {
    regime = next_regime(model, regime, rng);
    path.push_back({regime, t});
    t += holding_time(model, regime, rng);
  }
  return path;
}

std::vector<double> stationary_distribution(const RegimeModel& model) {
  const auto n = static_cast<Eigen::Index>(model.n_states());
  // Solve Q^T pi = 0 with one equation replaced by sum(pi) = 1.
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      A(i, j) = model.gen[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
  }
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kNotApplicable, "chain has no unique stationary distribution");
  }
  const Eigen::VectorXd pi = lu.solve(b);
  return {pi.data(), pi.data() + n};
}

McEstimate mc_price(const AsianOptionSpec& spec, const MarketState& state,
                    const RegimeModel& model, const McConfig& cfg) {
  validate_option(spec);
  validate_state(state, spec, model);
  validate_mc_config(cfg);

  const std::size_t units = cfg.antithetic ? (cfg.n_paths + 1) / 2 : cfg.n_paths;
  const std::size_t n_paths = cfg.antithetic ? 2 * units : units;
  if (state.t == spec.T) {
    return {payoff(spec, state.s, state.a / spec.T), 0.0, n_paths};
  }

  PathContext ctx{spec,
                  state,
                  model,
                  cfg,
                  Philox4x32(cfg.seed),
                  {},
                  std::max<std::size_t>(
                      1, static_cast<std::size_t>(std::ceil(
                             static_cast<double>(cfg.n_steps) * (spec.T - state.t) - 1e-9))),
                  spec.style != OptionStyle::kEuropeanPut};
  if (cfg.start == StartLaw::kStationary) ctx.start_law = stationary_distribution(model);

  const std::size_t n_chunks = (units + kChunk - 1) / kChunk;
  std::vector<Moments> chunks(n_chunks);
  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t end = std::min(units, (c + 1) * kChunk);
    for (std::size_t u = c * kChunk; u < end; ++u) chunks[c].add(simulate_unit(ctx, u));
  });
  Moments total;
  for (const auto& m : chunks) total.merge(m);
  const double var = total.n > 1.0 ? total.m2 / (total.n - 1.0) : 0.0;
  return {total.mean, std::sqrt(var / total.n), n_paths};
}

}  // namespace rsasian
