#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "rsasian/model.hpp"
#include "rsasian/quadrature.hpp"

namespace rsasian {

/// Scalars of the two-state closed form. `mu_sq` is the chain coupling
/// parameter, unrelated to the real-world drift.
struct ClosedFormScalars {
  double tau_bar;  // (sigma_1^2 - sigma_2^2)(T - t) / 4
  double alpha;    // 2 (a_12 - a_21) / (sigma_1^2 - sigma_2^2)
  double mu_sq;    // coupling_factor * a_12 a_21 / (sigma_1^2 - sigma_2^2)^2
};

/// Coefficient in front of a_12 a_21 / (sigma_1^2 - sigma_2^2)^2. The value
/// that reproduces the regime-switching put is 16 (kExact); kReduced uses 4
/// for comparison runs.
enum class CouplingFactor { kExact, kReduced };

double coupling_factor(CouplingFactor factor);

inline constexpr double kDegenerateVarianceGap = 1e-10;

ClosedFormScalars closed_form_scalars(const RegimeModel& model, double t, double T,
                           CouplingFactor factor = CouplingFactor::kExact);

/// Polar data of sqrt((1/4 + alpha + i rho^2)^2 + mu^2) = M e^{i theta}.
struct PolarRoot {
  double M;
  double theta;
};

PolarRoot m_theta(double rho, double alpha, double mu_sq);

/// Same root, with theta shifted by a multiple of pi to stay within pi/2 of
/// `previous_theta`. Both branches give the same integrand.
PolarRoot m_theta_continuous(double rho, double alpha, double mu_sq, double previous_theta);

/// How the regime sign (-1)^(i-1) is distributed over the three brace groups.
enum class SignGrouping { kFirstGroup, kAllGroups };

/// Which representation evaluates the put.
///  - kClosedForm: rho-integral with (M, theta, X_i, Y_i, f1, f2); shared rate only.
///  - kTransform: Fourier integral with the exact 2x2 matrix exponential;
///    handles regime-dependent rates and equal volatilities.
///  - kAutomatic: closed form when the rates coincide and the volatilities
///    differ, transform otherwise.
enum class EuropeanRoute { kAutomatic, kClosedForm, kTransform };

std::string_view to_string(EuropeanRoute route);
EuropeanRoute european_route_from_string(std::string_view name);

struct EuropeanOptions {
  EuropeanRoute route = EuropeanRoute::kAutomatic;
  CouplingFactor coupling = CouplingFactor::kExact;
  SignGrouping grouping = SignGrouping::kFirstGroup;
  // When false a quadrature estimate above tolerance is reported, not thrown.
  bool throw_on_tolerance = true;
};

struct EuropeanResult {
  double price;
  double error_estimate;
  EuropeanRoute route;  // the route actually taken
};

/// Value of the bracketed integrand of the closed form at rho for `regime`.
double closed_form_integrand(const RegimeModel& model, double S, double K, double t, double T,
                       std::size_t regime, double rho, const EuropeanOptions& options = {});

/// Two-state regime-switching European put. `regime` is 0-based.
EuropeanResult price_european_put_rs(const RegimeModel& model, double S, double K, double t,
                                     double T, std::size_t regime,
                                     const QuadratureSpec& quad = {},
                                     const EuropeanOptions& options = {});

/// Batch evaluator of the transform representation at one time to maturity.
/// The regime-dependent part of the integrand is tabulated once, so many
/// (S, K) pairs with |ln(S/K)| <= max_abs_log_moneyness are cheap.
class EuropeanTransformPricer {
 public:
  EuropeanTransformPricer(const RegimeModel& model, double maturity,
                          double max_abs_log_moneyness, std::size_t min_nodes = 2000);

  double put(std::size_t regime, double S, double K) const;
  /// Puts at strikes K_n = S exp(-(x_first + n dx)), n < count.
  std::vector<double> put_log_grid(std::size_t regime, double S, double x_first, double dx,
                                   std::size_t count) const;
  double maturity() const { return maturity_; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  double maturity_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<std::complex<double>> kernel_[2];
  double discount_[2] = {1.0, 1.0};
};

}  // namespace rsasian
