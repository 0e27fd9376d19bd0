#include "rsasian/greens.hpp"

#include <cmath>
#include <numbers>

#include "rsasian/error.hpp"
#include "rsasian/special_functions.hpp"

namespace rsasian {

double greens_boundary_term(double tau, double z, double xi, double gamma,
                            GreensVariant variant) {
  if (!(tau > 0.0)) throw Error(ErrorCode::kDomain, "greens_function needs tau > 0");
  const double g = 1.0 - gamma;
  if (g == 0.0) return 0.0;
  const double root = std::sqrt(tau);
  const double x = z + xi;
  const double e = variant == GreensVariant::kWithTau ? g * g * tau / 4.0 : g * g / 4.0;
  return 0.5 * g * exp_erfc(e - 0.5 * g * x, x / (2.0 * root) - 0.5 * g * root);
}

double greens_function(double tau, double z, double xi, double gamma, GreensVariant variant) {
  const double boundary = greens_boundary_term(tau, z, xi, gamma, variant);
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * tau);
  const double dm = z - xi;
  const double dp = z + xi;
  return norm * (std::exp(-dm * dm / (4.0 * tau)) + std::exp(-dp * dp / (4.0 * tau))) + boundary;
}

}  // namespace rsasian
