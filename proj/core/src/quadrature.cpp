#include "rsasian/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "rsasian/error.hpp"

namespace rsasian {

void validate_quadrature(const QuadratureSpec& spec) {
  if (!(spec.rho_max > 0.0)) throw Error(ErrorCode::kValidation, "rho_max not > 0");
  if (spec.n_rho < 16) throw Error(ErrorCode::kValidation, "n_rho must be >= 16");
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0)) {
    throw Error(ErrorCode::kValidation, "quadrature tolerances must be > 0");
  }
}

namespace {

GaussLegendre compute_gauss_legendre(std::size_t n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

CompositeRule composite_gauss_legendre(double a, double b, std::size_t panels,
                                       std::size_t order) {
  const auto& gl = gauss_legendre(order);
  CompositeRule rule;
  rule.nodes.reserve(panels * order);
  rule.weights.reserve(panels * order);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    for (std::size_t k = 0; k < order; ++k) {
      rule.nodes.push_back(mid + 0.5 * width * gl.nodes[k]);
      rule.weights.push_back(0.5 * width * gl.weights[k]);
    }
  }
  return rule;
}

double integrate(const CompositeRule& rule, const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * f(rule.nodes[k]);
  return sum;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol) {
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 15, rel_tol, &error);
  return {value, error};
}

}  // namespace rsasian
