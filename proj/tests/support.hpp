#pragma once

#include <cmath>
#include <numbers>

#include "rsasian/model.hpp"

namespace testing_support {

inline rsasian::RegimeModel desk_model() {
  return rsasian::validate_model({{0.05, 0.03}, {0.3, 0.2}, {}, {{-1.0, 1.0}, {1.0, -1.0}}});
}

inline rsasian::RegimeModel single_regime(double r, double sigma) {
  return rsasian::validate_model({{r, r}, {sigma, sigma}, {}, {{0.0, 0.0}, {0.0, 0.0}}});
}

inline double phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Black-Scholes put, written out independently of the library.
inline double bs_put(double s, double k, double T, double r, double q, double sigma) {
  const double v = sigma * std::sqrt(T);
  const double d1 = (std::log(s / k) + (r - q + 0.5 * sigma * sigma) * T) / v;
  const double d2 = d1 - v;
  return k * std::exp(-r * T) * phi(-d2) - s * std::exp(-q * T) * phi(-d1);
}

}  // namespace testing_support
