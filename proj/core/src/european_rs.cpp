#include "rsasian/european_rs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rsasian/error.hpp"

namespace rsasian {

namespace {

using cplx = std::complex<double>;

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

double variance_gap(const RegimeModel& model) {
  return model.sigma[0] * model.sigma[0] - model.sigma[1] * model.sigma[1];
}

// exp(s B) (1, 1)^T for B = [[b11, a12], [a21, b22]].
std::pair<cplx, cplx> two_state_exp_ones(cplx b11, cplx b22, double a12, double a21,
                                         double s) {
  const cplx m = 0.5 * (b11 + b22);
  const cplx h = 0.5 * (b11 - b22);
  const cplx delta = std::sqrt(h * h + a12 * a21);
  const cplx ep = std::exp((m + delta) * s);
  const cplx em = std::exp((m - delta) * s);
  const cplx cosh_part = 0.5 * (ep + em);
  cplx sinh_over_delta;
  if (std::abs(delta * s) < 1e-6) {
    const cplx ds = delta * s;
    sinh_over_delta = std::exp(m * s) * s * (1.0 + ds * ds / 6.0);
  } else {
    sinh_over_delta = 0.5 * (ep - em) / delta;
  }
  return {cosh_part + (h + a12) * sinh_over_delta, cosh_part + (a21 - h) * sinh_over_delta};
}

}  // namespace

double coupling_factor(CouplingFactor factor) {
  return factor == CouplingFactor::kExact ? 16.0 : 4.0;
}

ClosedFormScalars closed_form_scalars(const RegimeModel& model, double t, double T,
                           CouplingFactor factor) {
  require_two_states(model, "closed_form_scalars");
  const double gap = variance_gap(model);
  if (std::abs(gap) < kDegenerateVarianceGap) {
    throw Error(ErrorCode::kDegenerateVolatilities,
                "closed form needs sigma_1 != sigma_2 (variance gap below 1e-10)");
  }
  const double a12 = model.gen[0][1];
  const double a21 = model.gen[1][0];
  return {gap * (T - t) / 4.0, 2.0 * (a12 - a21) / gap,
          coupling_factor(factor) * a12 * a21 / (gap * gap)};
}

PolarRoot m_theta(double rho, double alpha, double mu_sq) {
  const double shift = 0.25 + alpha;
  const double rho2 = rho * rho;
  const double re = shift * shift - rho2 * rho2 + mu_sq;
  const double im = 2.0 * rho2 * shift;
  return {std::pow(re * re + im * im, 0.25), 0.5 * std::atan2(im, re)};
}

PolarRoot m_theta_continuous(double rho, double alpha, double mu_sq, double previous_theta) {
  PolarRoot root = m_theta(rho, alpha, mu_sq);
  while (root.theta - previous_theta > 0.5 * kPi) root.theta -= kPi;
  while (root.theta - previous_theta < -0.5 * kPi) root.theta += kPi;
  return root;
}

std::string_view to_string(EuropeanRoute route) {
  switch (route) {
    case EuropeanRoute::kAutomatic: return "automatic";
    case EuropeanRoute::kClosedForm: return "closed_form";
    case EuropeanRoute::kTransform: return "transform";
  }
  return "unknown";
}

EuropeanRoute european_route_from_string(std::string_view name) {
  for (auto r : {EuropeanRoute::kAutomatic, EuropeanRoute::kClosedForm,
                 EuropeanRoute::kTransform}) {
    if (to_string(r) == name) return r;
  }
  throw Error(ErrorCode::kValidation, "unknown european route '" + std::string(name) + "'");
}

namespace {

// Everything in the closed-form integrand that does not depend on rho.
struct ClosedFormSetup {
  ClosedFormScalars scalars;
  double sign;
  double log_distance;  // |ln(S/K) + r_i (T - t)|
  double var_sum_time;  // (sigma_1^2 + sigma_2^2)(T - t)
  double coupling_weight;
  bool sign_all;

  ClosedFormSetup(const RegimeModel& model, double S, double K, double t, double T,
                  std::size_t regime, const EuropeanOptions& options)
      : scalars(closed_form_scalars(model, t, T, options.coupling)),
        sign(regime == 0 ? 1.0 : -1.0),
        log_distance(std::abs(std::log(S / K) + model.r[regime] * (T - t))),
        var_sum_time((model.sigma[0] * model.sigma[0] + model.sigma[1] * model.sigma[1]) *
                     (T - t)),
        coupling_weight(2.0 * (model.gen[1][0] + model.gen[0][1]) / variance_gap(model)),
        sign_all(options.grouping == SignGrouping::kAllGroups) {}

  double operator()(double rho, const PolarRoot& root) const {
    const double rho2 = rho * rho;
    const double rho4p = rho2 * rho2 + 1.0 / 16.0;
    const double x = sign * root.M * scalars.tau_bar * std::cos(root.theta);
    const double y = sign * root.M * scalars.tau_bar * std::sin(root.theta);
    const double f1 = std::exp(-rho / kSqrt2 * log_distance);
    const double f2 = 0.25 * rho2 * var_sum_time - rho / kSqrt2 * log_distance;
    const double p = 2.0 * rho2 - 0.5;
    const double q = 2.0 * rho2 + 0.5;
    const double ex = std::exp(x);
    const double emx = std::exp(-x);
    const double th = root.theta;

    double first = 0.0;
    double second = 0.0;
    if (root.M > 0.0) {
      first = sign * f1 * coupling_weight / (root.M * rho4p) *
              (ex * (p * std::sin(f2 + th - y) - q * std::cos(f2 + th - y)) -
               emx * (p * std::sin(f2 + th + y) - q * std::cos(f2 + th + y)));
      second = 2.0 * f1 / root.M *
               (ex * (std::sin(f2 + th - y) + std::cos(f2 + th - y)) -
                emx * (std::sin(f2 + th + y) + std::cos(f2 + th + y)));
    }
    const double third = f1 / rho4p *
                         (ex * (p * std::sin(f2 - y) - q * std::cos(f2 - y)) +
                          emx * (p * std::sin(f2 + y) - q * std::cos(f2 + y)));
    if (sign_all) return first + sign * (second + third);
    return first + second + third;
  }
};

double closed_form_prefactor(const RegimeModel& model, double S, double K, double t, double T,
                             std::size_t regime) {
  const double var_sum = model.sigma[0] * model.sigma[0] + model.sigma[1] * model.sigma[1];
  const double rate = model.r[regime] + model.gen[1][0] + model.gen[0][1] + var_sum / 8.0;
  return 1.0 / (4.0 * kPi * kSqrt2) * std::sqrt(S * K) * std::exp(-0.5 * rate * (T - t));
}

double closed_form_panels(const ClosedFormSetup& setup, double rho_max, std::size_t n_nodes) {
  constexpr std::size_t kOrder = 16;
  const std::size_t panels = std::max<std::size_t>(1, n_nodes / kOrder);
  const auto rule = composite_gauss_legendre(0.0, rho_max, panels, kOrder);
  double sum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double rho = rule.nodes[k];
    const PolarRoot root =
        m_theta_continuous(rho, setup.scalars.alpha, setup.scalars.mu_sq, theta);
    theta = root.theta;
    sum += rule.weights[k] * setup(rho, root);
  }
  return sum;
}

EuropeanResult closed_form_price(const RegimeModel& model, double S, double K, double t,
                                 double T, std::size_t regime, const QuadratureSpec& quad,
                                 const EuropeanOptions& options) {
  const ClosedFormSetup setup(model, S, K, t, T, regime, options);
  const double pref = closed_form_prefactor(model, S, K, t, T, regime);
  const double intrinsic = K * std::exp(-model.r[regime] * (T - t));

  double integral = 0.0;
  double error = 0.0;
  const bool at_the_money_forward = setup.log_distance < 1e-8;
  if (quad.rule == QuadratureRule::kAdaptive || at_the_money_forward) {
    auto f = [&](double rho) {
      return setup(rho, m_theta(rho, setup.scalars.alpha, setup.scalars.mu_sq));
    };
    const auto res = integrate_adaptive(f, 0.0, quad.rho_max, 1e-10);
    integral = res.value;
    error = res.error;
  } else {
    integral = closed_form_panels(setup, quad.rho_max, quad.n_rho);
    const double coarse = closed_form_panels(setup, quad.rho_max, quad.n_rho / 2);
    error = std::abs(integral - coarse);
  }
  // Truncation: compare against the integral over [0, 0.9 rho_max].
  const double shorter = closed_form_panels(setup, 0.9 * quad.rho_max, quad.n_rho);
  error += std::abs(integral - shorter);

  const double price = intrinsic + pref * integral;
  return {price, pref * error, EuropeanRoute::kClosedForm};
}

struct TransformGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

TransformGrid transform_grid(const RegimeModel& model, double maturity,
                             double max_abs_log_moneyness, std::size_t min_nodes) {
  constexpr std::size_t kOrder = 16;
  const double sig_min = std::min(model.sigma[0], model.sigma[1]);
  // exp(-sigma_min^2 omega^2 s / 2) < e^-40 beyond omega_max.
  const double omega_max = std::sqrt(80.0 / (sig_min * sig_min * maturity));
  const double width = std::min(0.5, 6.0 / std::max(max_abs_log_moneyness, 1e-12));
  const auto panels = std::max<std::size_t>(
      {static_cast<std::size_t>(std::ceil(omega_max / width)), min_nodes / kOrder, 1});
  const auto rule = composite_gauss_legendre(0.0, omega_max, panels, kOrder);
  return {rule.nodes, rule.weights};
}

}  // namespace

double closed_form_integrand(const RegimeModel& model, double S, double K, double t, double T,
                       std::size_t regime, double rho, const EuropeanOptions& options) {
  const ClosedFormSetup setup(model, S, K, t, T, regime, options);
  return setup(rho, m_theta(rho, setup.scalars.alpha, setup.scalars.mu_sq));
}

EuropeanTransformPricer::EuropeanTransformPricer(const RegimeModel& model, double maturity,
                                                 double max_abs_log_moneyness,
                                                 std::size_t min_nodes)
    : maturity_(maturity) {
  require_two_states(model, "EuropeanTransformPricer");
  if (!(maturity > 0.0)) throw Error(ErrorCode::kDomain, "transform pricer needs maturity > 0");
  auto grid = transform_grid(model, maturity, max_abs_log_moneyness, min_nodes);
  nodes_ = std::move(grid.nodes);
  weights_ = std::move(grid.weights);

  const double a12 = model.gen[0][1];
  const double a21 = model.gen[1][0];
  {
    const auto [d1, d2] =
        two_state_exp_ones(cplx(-a12 - model.r[0]), cplx(-a21 - model.r[1]), a12, a21, maturity);
    discount_[0] = d1.real();
    discount_[1] = d2.real();
  }
  for (auto& k : kernel_) k.resize(nodes_.size());
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const double w = nodes_[n];
    const cplx half_iw(0.5, w);
    cplx c[2];
    for (std::size_t j = 0; j < 2; ++j) {
      const double var = model.sigma[j] * model.sigma[j];
      c[j] = -model.r[j] + half_iw * (model.r[j] - model.dividend(j)) -
             0.5 * var * (w * w + 0.25);
    }
    const auto [e1, e2] = two_state_exp_ones(c[0] - a12, c[1] - a21, a12, a21, maturity);
    const double denom = 0.25 + w * w;
    kernel_[0][n] = e1 / denom;
    kernel_[1][n] = e2 / denom;
  }
}

double EuropeanTransformPricer::put(std::size_t regime, double S, double K) const {
  const double x0 = std::log(S / K);
  const auto& kern = kernel_[regime];
  double sum = 0.0;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const double phase = nodes_[n] * x0;
    sum += weights_[n] * (std::cos(phase) * kern[n].real() - std::sin(phase) * kern[n].imag());
  }
  return K * discount_[regime] - std::sqrt(S * K) / kPi * sum;
}

std::vector<double> EuropeanTransformPricer::put_log_grid(std::size_t regime, double S,
                                                          double x_first, double dx,
                                                          std::size_t count) const {
  const auto& kern = kernel_[regime];
  std::vector<double> sums(count, 0.0);
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    // e^{i w x_n} by rotation; count is small enough that the drift stays at rounding level.
    cplx phase = std::polar(1.0, nodes_[n] * x_first);
    const cplx step = std::polar(1.0, nodes_[n] * dx);
    const cplx term = weights_[n] * kern[n];
    for (std::size_t j = 0; j < count; ++j) {
      sums[j] += (phase * term).real();
      phase *= step;
    }
  }
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double K = S * std::exp(-(x_first + static_cast<double>(j) * dx));
    out[j] = K * discount_[regime] - std::sqrt(S * K) / kPi * sums[j];
  }
  return out;
}

EuropeanResult price_european_put_rs(const RegimeModel& model, double S, double K, double t,
                                     double T, std::size_t regime, const QuadratureSpec& quad,
                                     const EuropeanOptions& options) {
  require_two_states(model, "price_european_put_rs");
  validate_quadrature(quad);
  if (!(S > 0.0) || !(K > 0.0)) throw Error(ErrorCode::kDomain, "S and K must be > 0");
  if (!(t < T)) throw Error(ErrorCode::kDomain, "european put needs t < T");
  if (regime > 1) throw Error(ErrorCode::kDomain, "regime index out of range");

  const bool shared_rate = std::abs(model.r[0] - model.r[1]) <= 1e-14 &&
                           model.dividend(0) == 0.0 && model.dividend(1) == 0.0;
  EuropeanRoute route = options.route;
  if (route == EuropeanRoute::kAutomatic) {
    const bool distinct_vols = std::abs(variance_gap(model)) >= kDegenerateVarianceGap;
    route = shared_rate && distinct_vols ? EuropeanRoute::kClosedForm : EuropeanRoute::kTransform;
  }
  if (route == EuropeanRoute::kClosedForm && !shared_rate) {
    throw Error(ErrorCode::kNotApplicable,
                "closed form needs a shared rate and zero dividend yields; use the transform route");
  }

  EuropeanResult result{};
  if (route == EuropeanRoute::kClosedForm) {
    result = closed_form_price(model, S, K, t, T, regime, quad, options);
  } else {
    const double moneyness = std::abs(std::log(S / K));
    const EuropeanTransformPricer fine(model, T - t, moneyness, quad.n_rho);
    const EuropeanTransformPricer coarse(model, T - t, moneyness, quad.n_rho / 2);
    // The coarse rule is at least half as dense; agreement bounds the error.
    const double v_fine = fine.put(regime, S, K);
    const double v_coarse = coarse.put(regime, S, K);
    result = {v_fine, std::abs(v_fine - v_coarse), EuropeanRoute::kTransform};
  }
  const double tol = std::max(quad.abs_tol, quad.rel_tol * std::abs(result.price));
  if (options.throw_on_tolerance && result.error_estimate > tol) {
    throw Error(ErrorCode::kQuadratureNotConverged,
                "european quadrature error estimate " + std::to_string(result.error_estimate) +
                    " exceeds tolerance " + std::to_string(tol));
  }
  return result;
}

}  // namespace rsasian
