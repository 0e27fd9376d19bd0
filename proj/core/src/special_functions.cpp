#include "rsasian/special_functions.hpp"

#include <cmath>
#include <numbers>

namespace rsasian {

double erfcx(double x) {
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  // Asymptotic series; the first omitted term is below 1e-12 relative for x >= 25.
  const double inv2 = 1.0 / (x * x);
  const double series = 1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2 * inv2 * inv2 +
                        6.5625 * inv2 * inv2 * inv2 * inv2;
  return series / (x * std::sqrt(std::numbers::pi));
}

double exp_erfc(double a, double w) {
  if (w > 0.0) return std::exp(a - w * w) * erfcx(w);
  return std::exp(a) * std::erfc(w);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

struct D12 {
  double d1, d2;
};

D12 d12(double spot, double strike, double maturity, double rate, double dividend,
        double sigma) {
  const double vol = sigma * std::sqrt(maturity);
  const double d1 =
      (std::log(spot / strike) + (rate - dividend + 0.5 * sigma * sigma) * maturity) / vol;
  return {d1, d1 - vol};
}

}  // namespace

double black_scholes_put(double spot, double strike, double maturity, double rate,
                         double dividend, double sigma) {
  if (maturity <= 0.0) return std::max(strike - spot, 0.0);
  const auto [d1, d2] = d12(spot, strike, maturity, rate, dividend, sigma);
  return strike * std::exp(-rate * maturity) * normal_cdf(-d2) -
         spot * std::exp(-dividend * maturity) * normal_cdf(-d1);
}

double black_scholes_call(double spot, double strike, double maturity, double rate,
                          double dividend, double sigma) {
  if (maturity <= 0.0) return std::max(spot - strike, 0.0);
  const auto [d1, d2] = d12(spot, strike, maturity, rate, dividend, sigma);
  return spot * std::exp(-dividend * maturity) * normal_cdf(d1) -
         strike * std::exp(-rate * maturity) * normal_cdf(d2);
}

}  // namespace rsasian
