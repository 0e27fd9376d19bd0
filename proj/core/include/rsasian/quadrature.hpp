#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rsasian {

enum class QuadratureRule { kGaussLegendrePanels, kAdaptive };

/// Controls the truncated improper integrals of the European pricer.
struct QuadratureSpec {
  double rho_max = 50.0;
  std::size_t n_rho = 2000;
  QuadratureRule rule = QuadratureRule::kGaussLegendrePanels;
  double abs_tol = 1e-6;
  double rel_tol = 1e-4;
};

void validate_quadrature(const QuadratureSpec& spec);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(std::size_t order);

/// Nodes and weights of a composite Gauss-Legendre rule with `panels` equal
/// panels of the given order on [a, b].
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

CompositeRule composite_gauss_legendre(double a, double b, std::size_t panels,
                                       std::size_t order);

/// Sums f over a composite rule in node order.
double integrate(const CompositeRule& rule, const std::function<double(double)>& f);

struct AdaptiveResult {
  double value;
  double error;
};

/// Adaptive Gauss-Kronrod on [a, b].
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol);

}  // namespace rsasian
