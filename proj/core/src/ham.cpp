#include "rsasian/ham.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
// pchip.hpp calls isnan unqualified and relies on this header being seen first.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "rsasian/error.hpp"
#include "rsasian/european_rs.hpp"
#include "rsasian/parallel.hpp"
#include "rsasian/special_functions.hpp"

namespace rsasian {

namespace {

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

template <class E, std::size_t N>
std::string_view name_of(E value, const NameTable<E, N>& names) {
  for (const auto& [v, n] : names) {
    if (v == value) return n;
  }
  return "unknown";
}

template <class E, std::size_t N>
E parse_name(std::string_view name, std::string_view what, const NameTable<E, N>& names) {
  for (const auto& [v, n] : names) {
    if (n == name) return v;
  }
  throw Error(ErrorCode::kValidation,
              "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

constexpr NameTable<TerminalMode, 2> kTerminalNames = {{
    {TerminalMode::kZero, "paper_zero"}, {TerminalMode::kPayoff, "payoff"}}};
constexpr NameTable<InitialGuessMode, 2> kGuessNames = {{
    {InitialGuessMode::kEuropeanRs, "european_rs"}, {InitialGuessMode::kZero, "zero"}}};
constexpr NameTable<SeriesNormalization, 2> kNormNames = {{
    {SeriesNormalization::kFactorial, "factorial"}, {SeriesNormalization::kUnit, "unit"}}};

void require_ham_model(const RegimeModel& model) {
  require_two_states(model, "ham");
  for (std::size_t i = 0; i < 2; ++i) {
    if (model.dividend(i) != 0.0) {
      throw Error(ErrorCode::kNotApplicable, "ham engine supports zero dividend yields only");
    }
  }
}

double reduced_payoff(double z, double T) { return std::max(std::exp(-z) / T - 1.0, 0.0); }

TermGrid empty_term(const HamGrid& grid, int m) {
  TermGrid term;
  term.m = m;
  term.grid = grid;
  for (std::size_t i = 0; i < 2; ++i) {
    term.values[i] = Eigen::MatrixXd::Zero(grid.u.size(), grid.z.size());
    term.d_dz[i] = Eigen::MatrixXd::Zero(grid.u.size(), grid.z.size());
  }
  return term;
}

void fill_derivatives(TermGrid& term) {
  for (std::size_t i = 0; i < 2; ++i) term.d_dz[i] = derivative_z(term.values[i], term.grid.dz);
}

// int_lo^hi K_s(d - t) (1 - |t|/h) dt with K_s the heat kernel of variance 2s;
// [lo, hi] is [-h, 0] or [0, h].
double hat_integral(double d, double s, double lo, double hi, double h) {
  const double c = 2.0 * std::sqrt(s);
  const double hi_arg = d - lo;
  const double lo_arg = d - hi;
  // Mass of K on [d - hi, d - lo], computed from the tail that avoids cancellation.
  double mass;
  if (lo_arg > 0.0) {
    mass = 0.5 * (std::erfc(lo_arg / c) - std::erfc(hi_arg / c));
  } else {
    mass = 0.5 * (std::erfc(-hi_arg / c) - std::erfc(-lo_arg / c));
  }
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * s);
  auto kernel = [&](double x) { return norm * std::exp(-x * x / (4.0 * s)); };
  const double first_moment = d * mass + 2.0 * s * (kernel(hi_arg) - kernel(lo_arg));
  const double sign = lo >= 0.0 ? -1.0 : 1.0;
  return mass + sign * first_moment / h;
}

bool same_grid(const HamGrid& a, const HamGrid& b) {
  return a.z == b.z && a.u == b.u && a.zero_index == b.zero_index;
}


// Trapezoid in u' of the kernel-weighted xi integrals of the refined source
// Fx (column l is time level l). Result is (z, u). For each lag d = k - l
// the kernel is Toeplitz (direct) plus Hankel (image and boundary) in the
// refined index, so the xi sums are linear convolutions done by FFT and the
// u' sum is accumulated in the spectral domain.
Eigen::MatrixXd duhamel_sum(const Eigen::MatrixXd& Fx, const HamGrid& grid, Eigen::Index refine,
                            double dt, double gamma, GreensVariant variant) {
  using cvec = std::vector<std::complex<double>>;
  const auto n_z = static_cast<Eigen::Index>(grid.z.size());
  const auto n_u = static_cast<Eigen::Index>(grid.u.size());
  const auto j0 = static_cast<Eigen::Index>(grid.zero_index);
  const Eigen::Index n_f = Fx.rows();
  const Eigen::Index last = n_f - 1;
  const double h = grid.dz / static_cast<double>(refine);

  // Kernel arrays cover z_n - x_p (direct) and z_n + x_p (image) for all n, p.
  const Eigen::Index kernel_len = (n_z - 1) * refine + n_f;
  const Eigen::Index direct_lo = -j0 * refine - last;
  const Eigen::Index image_lo = -j0 * refine;
  std::size_t nfft = 1;
  while (nfft < static_cast<std::size_t>(kernel_len + n_f - 1)) nfft *= 2;
  const std::size_t n_spec = nfft / 2 + 1;

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);

  std::vector<cvec> src_direct(static_cast<std::size_t>(n_u));
  std::vector<cvec> src_image(static_cast<std::size_t>(n_u));
  {
    std::vector<double> buf(nfft);
    for (Eigen::Index l = 0; l < n_u; ++l) {
      std::fill(buf.begin(), buf.end(), 0.0);
      for (Eigen::Index p = 0; p < n_f; ++p) buf[static_cast<std::size_t>(p)] = Fx(p, l);
      fft.fwd(src_direct[static_cast<std::size_t>(l)], buf);
      std::fill(buf.begin(), buf.end(), 0.0);
      for (Eigen::Index p = 0; p < n_f; ++p) buf[static_cast<std::size_t>(p)] = Fx(last - p, l);
      fft.fwd(src_image[static_cast<std::size_t>(l)], buf);
    }
  }

  // Per-lag hat integrals on the union of both displacement ranges.
  const Eigen::Index q_lo = direct_lo;
  const Eigen::Index q_hi = image_lo + kernel_len - 1;
  const auto n_q = static_cast<std::size_t>(q_hi - q_lo + 1);
  struct LagTables {
    std::vector<double> left, right, bound;
    cvec direct, image;
  };
  std::vector<LagTables> lags(static_cast<std::size_t>(n_u));
  {
    std::vector<double> buf(nfft);
    for (Eigen::Index d = 1; d < n_u; ++d) {
      auto& lag = lags[static_cast<std::size_t>(d)];
      const double s = static_cast<double>(d) * dt;
      lag.left.resize(n_q);
      lag.right.resize(n_q);
      lag.bound.resize(n_q);
      for (std::size_t t = 0; t < n_q; ++t) {
        const double x = static_cast<double>(q_lo + static_cast<Eigen::Index>(t)) * h;
        lag.left[t] = hat_integral(x, s, -h, 0.0, h);
        lag.right[t] = hat_integral(x, s, 0.0, h, h);
        lag.bound[t] = greens_boundary_term(s, x, 0.0, gamma, variant);
      }
      std::fill(buf.begin(), buf.end(), 0.0);
      for (Eigen::Index m = 0; m < kernel_len; ++m) {
        const auto t = static_cast<std::size_t>(direct_lo + m - q_lo);
        buf[static_cast<std::size_t>(m)] = lag.left[t] + lag.right[t];
      }
      fft.fwd(lag.direct, buf);
      std::fill(buf.begin(), buf.end(), 0.0);
      for (Eigen::Index m = 0; m < kernel_len; ++m) {
        const auto t = static_cast<std::size_t>(image_lo + m - q_lo);
        buf[static_cast<std::size_t>(m)] = lag.left[t] + lag.right[t] + h * lag.bound[t];
      }
      fft.fwd(lag.image, buf);
    }
  }

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n_z, n_u);
  cvec spec_direct(n_spec), spec_image(n_spec);
  std::vector<double> out_direct, out_image;
  for (Eigen::Index k = 1; k < n_u; ++k) {
    std::fill(spec_direct.begin(), spec_direct.end(), 0.0);
    std::fill(spec_image.begin(), spec_image.end(), 0.0);
    for (Eigen::Index l = 0; l < k; ++l) {
      const double w = l == 0 ? 0.5 : 1.0;
      const auto& lag = lags[static_cast<std::size_t>(k - l)];
      const auto& fd = src_direct[static_cast<std::size_t>(l)];
      const auto& fi = src_image[static_cast<std::size_t>(l)];
      for (std::size_t b = 0; b < n_spec; ++b) {
        spec_direct[b] += w * lag.direct[b] * fd[b];
        spec_image[b] += w * lag.image[b] * fi[b];
      }
    }
    fft.inv(out_direct, spec_direct, static_cast<Eigen::Index>(nfft));
    fft.inv(out_image, spec_image, static_cast<Eigen::Index>(nfft));

    for (Eigen::Index n = 0; n < n_z; ++n) {
      const Eigen::Index a = (n - j0) * refine;
      double value = out_direct[static_cast<std::size_t>(a - direct_lo)] +
                     out_image[static_cast<std::size_t>(a + last - image_lo)];
      // The end hats are one-sided and the trapezoid weights halve there.
      for (Eigen::Index l = 0; l < k; ++l) {
        const double w = l == 0 ? 0.5 : 1.0;
        const auto& lag = lags[static_cast<std::size_t>(k - l)];
        const auto at = [&](Eigen::Index q) { return static_cast<std::size_t>(q - q_lo); };
        const double f0 = Fx(0, l);
        const double fl = Fx(last, l);
        value -= w * (f0 * (lag.left[at(a)] + lag.right[at(a)] + 0.5 * h * lag.bound[at(a)]) +
                      fl * (lag.right[at(a - last)] + lag.left[at(a + last)] +
                            0.5 * h * lag.bound[at(a + last)]));
      }
      if (n >= j0) value += 0.5 * Fx(a, k);
      acc(n, k) = value;
    }
  }
  return dt * acc;
}
}  // namespace

std::string_view to_string(TerminalMode mode) { return name_of(mode, kTerminalNames); }
std::string_view to_string(InitialGuessMode mode) { return name_of(mode, kGuessNames); }
std::string_view to_string(SeriesNormalization mode) { return name_of(mode, kNormNames); }
TerminalMode terminal_mode_from_string(std::string_view name) {
  return parse_name(name, "terminal_mode", kTerminalNames);
}
InitialGuessMode initial_guess_mode_from_string(std::string_view name) {
  return parse_name(name, "initial_guess_mode", kGuessNames);
}
SeriesNormalization series_normalization_from_string(std::string_view name) {
  return parse_name(name, "normalization", kNormNames);
}

void validate_ham_config(const HamConfig& config) {
  if (config.m_trunc < 0) throw Error(ErrorCode::kValidation, "M_trunc not >= 0");
  if (config.n_z < 9) throw Error(ErrorCode::kValidation, "n_z not >= 9");
  if (config.n_u < 4) throw Error(ErrorCode::kValidation, "n_u not >= 4");
  if (config.xi_refine < 1) throw Error(ErrorCode::kValidation, "xi_refine not >= 1");
  if (config.z_min && config.z_max && !(*config.z_max > *config.z_min)) {
    throw Error(ErrorCode::kValidation, "z_max not > z_min");
  }
  validate_quadrature(config.quadrature);
}

HamGrid make_ham_grid(const HamConfig& config, double T) {
  validate_ham_config(config);
  if (!(T > 0.0)) throw Error(ErrorCode::kValidation, "T not > 0");
  const double z_min = config.z_min.value_or(-std::log(20.0 * T));
  const double z_max = config.z_max.value_or(-std::log(1e-4));
  if (!(z_max > z_min)) throw Error(ErrorCode::kValidation, "z_max not > z_min");
  if (z_min > 0.0 || z_max <= 0.0) {
    throw Error(ErrorCode::kValidation, "z grid must contain 0 (z_min <= 0 < z_max)");
  }
  HamGrid grid;
  grid.dz = (z_max - z_min) / static_cast<double>(config.n_z - 1);
  grid.zero_index = static_cast<std::size_t>(std::llround(-z_min / grid.dz));
  grid.z.resize(config.n_z);
  for (std::size_t n = 0; n < config.n_z; ++n) {
    grid.z[n] = (static_cast<double>(n) - static_cast<double>(grid.zero_index)) * grid.dz;
  }
  grid.du = T / static_cast<double>(config.n_u - 1);
  grid.u.resize(config.n_u);
  for (std::size_t k = 0; k < config.n_u; ++k) grid.u[k] = static_cast<double>(k) * grid.du;
  grid.u.back() = T;
  return grid;
}

Eigen::MatrixXd derivative_z(const Eigen::MatrixXd& f, double dz) {
  const Eigen::Index n = f.cols();
  Eigen::MatrixXd d(f.rows(), n);
  const double c = 1.0 / (12.0 * dz);
  for (Eigen::Index j = 2; j < n - 2; ++j) {
    d.col(j) = c * (-f.col(j + 2) + 8.0 * f.col(j + 1) - 8.0 * f.col(j - 1) + f.col(j - 2));
  }
  for (Eigen::Index k = 0; k < 2; ++k) {
    d.col(k) = c * (-25.0 * f.col(k) + 48.0 * f.col(k + 1) - 36.0 * f.col(k + 2) +
                    16.0 * f.col(k + 3) - 3.0 * f.col(k + 4));
    const Eigen::Index j = n - 1 - k;
    d.col(j) = c * (25.0 * f.col(j) - 48.0 * f.col(j - 1) + 36.0 * f.col(j - 2) -
                    16.0 * f.col(j - 3) + 3.0 * f.col(j - 4));
  }
  return d;
}

TermGrid initial_guess(const RegimeModel& model, const HamGrid& grid, InitialGuessMode mode,
                       const QuadratureSpec& quad) {
  require_ham_model(model);
  TermGrid term = empty_term(grid, 0);
  if (mode == InitialGuessMode::kZero) return term;

  const double T = grid.maturity();
  const double max_log = std::max(std::abs(std::log(T) + grid.z.front()),
                                  std::abs(std::log(T) + grid.z.back()));
  for (std::size_t n = 0; n < grid.z.size(); ++n) {
    const double h = reduced_payoff(grid.z[n], T);
    term.values[0](0, static_cast<Eigen::Index>(n)) = h;
    term.values[1](0, static_cast<Eigen::Index>(n)) = h;
  }
  parallel_for(grid.u.size() - 1, [&](std::size_t idx) {
    const std::size_t k = idx + 1;
    const EuropeanTransformPricer pricer(model, grid.u[k], max_log, quad.n_rho);
    // ln(S/K) = ln T + z on the uniform z grid.
    for (std::size_t i = 0; i < 2; ++i) {
      const auto puts =
          pricer.put_log_grid(i, T, std::log(T) + grid.z.front(), grid.dz, grid.z.size());
      for (std::size_t n = 0; n < grid.z.size(); ++n) {
        term.values[i](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) = puts[n] / T;
      }
    }
  });
  fill_derivatives(term);
  return term;
}

TermGrid homogeneous_payoff(const RegimeModel& model, const HamGrid& grid) {
  require_ham_model(model);
  TermGrid term = empty_term(grid, 0);
  const double T = grid.maturity();
  for (std::size_t k = 0; k < grid.u.size(); ++k) {
    for (std::size_t n = 0; n < grid.z.size(); ++n) {
      for (std::size_t i = 0; i < 2; ++i) {
        const double v =
            k == 0 ? reduced_payoff(grid.z[n], T)
                   : black_scholes_call(std::exp(-grid.z[n]), T, grid.u[k], 0.0, model.r[i],
                                        model.sigma[i]) /
                         T;
        term.values[i](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) = v;
      }
    }
  }
  fill_derivatives(term);
  return term;
}

TermGrid zeroth_term(const RegimeModel& model, const HamGrid& grid, const HamConfig& config) {
  TermGrid term = initial_guess(model, grid, config.initial_guess_mode, config.quadrature);
  // The guess starts from the payoff (European) or from zero; add the
  // homogeneous payoff solution to reach the requested start.
  const double target = config.terminal_mode == TerminalMode::kPayoff ? 1.0 : 0.0;
  const double start = config.initial_guess_mode == InitialGuessMode::kEuropeanRs ? 1.0 : 0.0;
  const double weight = target - start;
  if (weight != 0.0) {
    const TermGrid h = homogeneous_payoff(model, grid);
    for (std::size_t i = 0; i < 2; ++i) term.values[i] += weight * h.values[i];
    fill_derivatives(term);
  }
  return term;
}

std::array<double, 2> operator_residual(const RegimeModel& model, const TermGrid& term) {
  require_ham_model(model);
  const auto& g = term.grid;
  std::array<double, 2> out{};
  for (std::size_t i = 0; i < 2; ++i) {
    const double s2 = model.sigma[i] * model.sigma[i];
    const double g1 = 1.0 + lambda_gamma(model, i).gamma;
    const auto& v = term.values[i];
    double worst = 0.0;
    for (Eigen::Index k = 1; k + 1 < v.rows(); ++k) {
      for (Eigen::Index n = 1; n + 1 < v.cols(); ++n) {
        const double v_tau = (v(k + 1, n) - v(k - 1, n)) / (2.0 * g.du) * 2.0 / s2;
        const double v_z = (v(k, n + 1) - v(k, n - 1)) / (2.0 * g.dz);
        const double v_zz = (v(k, n + 1) - 2.0 * v(k, n) + v(k, n - 1)) / (g.dz * g.dz);
        worst = std::max(worst, std::abs(v_tau - v_zz - g1 * v_z));
      }
    }
    out[i] = worst;
  }
  return out;
}

TermGrid ham_step(const TermGrid& prev, const RegimeModel& model, const HamConfig& config,
                  StepDetail* detail) {
  require_ham_model(model);
  validate_ham_config(config);
  const HamGrid& grid = prev.grid;
  const auto n_z = static_cast<Eigen::Index>(grid.z.size());
  const auto n_u = static_cast<Eigen::Index>(grid.u.size());
  for (std::size_t i = 0; i < 2; ++i) {
    if (prev.values[i].rows() != n_u || prev.values[i].cols() != n_z ||
        prev.d_dz[i].rows() != n_u || prev.d_dz[i].cols() != n_z) {
      throw Error(ErrorCode::kGridMismatch, "ham_step: term shape does not match its grid");
    }
  }
  TermGrid next = empty_term(grid, prev.m + 1);
  if (detail) {
    for (std::size_t i = 0; i < 2; ++i) {
      detail->hat[i] = Eigen::MatrixXd::Zero(n_u, n_z);
      detail->source[i] = Eigen::MatrixXd::Zero(n_u, n_z);
      detail->tail_ratio[i] = 0.0;
    }
  }
  if (prev.values[0].isZero(0.0) && prev.values[1].isZero(0.0)) return next;

  const auto j0 = static_cast<Eigen::Index>(grid.zero_index);
  const Eigen::Index n_xi = n_z - j0;
  const auto refine = static_cast<Eigen::Index>(config.xi_refine);
  const Eigen::Index n_f = (n_xi - 1) * refine + 1;
  const double h = grid.dz / static_cast<double>(refine);

  parallel_for(2, [&](std::size_t i) {
    const std::size_t j = 1 - i;
    const double s2 = model.sigma[i] * model.sigma[i];
    const auto coeffs = lambda_gamma(model, i);
    const double g1 = 1.0 + coeffs.gamma;
    const double dt = grid.du * s2 / 2.0;

    // Source of the heat equation on the full grid.
    Eigen::MatrixXd F(n_u, n_z);
    for (Eigen::Index k = 0; k < n_u; ++k) {
      const double tau = static_cast<double>(k) * dt;
      for (Eigen::Index n = 0; n < n_z; ++n) {
        const double z = grid.z[static_cast<std::size_t>(n)];
        const double src = coeffs.lambda * (prev.values[i](k, n) - prev.values[j](k, n)) -
                           2.0 * std::exp(z) / s2 * prev.d_dz[i](k, n);
        F(k, n) = std::exp(g1 * z / 2.0 + tau * g1 * g1 / 4.0) * src;
      }
    }
    const double peak = F.rightCols(n_xi).cwiseAbs().maxCoeff();
    const double tail = F.col(n_z - 1).cwiseAbs().maxCoeff();

    // Source on the refined xi grid; column k is time level k.
    Eigen::MatrixXd Fx(n_f, n_u);
    std::vector<double> row(static_cast<std::size_t>(n_xi));
    for (Eigen::Index k = 0; k < n_u; ++k) {
      for (Eigen::Index q = 0; q < n_xi; ++q) row[static_cast<std::size_t>(q)] = F(k, j0 + q);
      if (refine == 1) {
        for (Eigen::Index q = 0; q < n_xi; ++q) Fx(q, k) = row[static_cast<std::size_t>(q)];
        continue;
      }
      const boost::math::interpolators::cardinal_cubic_b_spline<double> spline(
          row.data(), row.size(), 0.0, grid.dz);
      for (Eigen::Index p = 0; p < n_f; ++p) {
        Fx(p, k) = p % refine == 0 ? row[static_cast<std::size_t>(p / refine)]
                                   : spline(static_cast<double>(p) * h);
      }
    }

    const Eigen::MatrixXd acc = duhamel_sum(Fx, grid, refine, dt, coeffs.gamma, config.greens);
    for (Eigen::Index k = 0; k < n_u; ++k) {
      const double tau = static_cast<double>(k) * dt;
      for (Eigen::Index n = 0; n < n_z; ++n) {
        const double z = grid.z[static_cast<std::size_t>(n)];
        next.values[i](k, n) = std::exp(-g1 * z / 2.0 - tau * g1 * g1 / 4.0) * acc(n, k);
      }
    }
    if (detail) {
      detail->hat[i] = acc.transpose();
      detail->source[i] = F;
      detail->tail_ratio[i] = peak > 0.0 ? tail / peak : 0.0;
    }
  });
  fill_derivatives(next);
  return next;
}

SeriesSurface assemble_series(const std::vector<TermGrid>& terms,
                              SeriesNormalization normalization) {
  if (terms.empty()) throw Error(ErrorCode::kValidation, "assemble_series needs term 0");
  SeriesSurface out;
  out.grid = terms.front().grid;
  const auto rows = static_cast<Eigen::Index>(out.grid.u.size());
  const auto cols = static_cast<Eigen::Index>(out.grid.z.size());
  for (std::size_t i = 0; i < 2; ++i) out.values[i] = Eigen::MatrixXd::Zero(rows, cols);
  double factorial = 1.0;
  for (std::size_t m = 0; m < terms.size(); ++m) {
    const TermGrid& term = terms[m];
    if (!same_grid(term.grid, out.grid) || term.values[0].rows() != rows ||
        term.values[0].cols() != cols || term.values[1].rows() != rows ||
        term.values[1].cols() != cols) {
      throw Error(ErrorCode::kGridMismatch,
                  "assemble_series: term " + std::to_string(m) + " is on a different grid");
    }
    if (m > 0) factorial *= static_cast<double>(m);
    const double weight = normalization == SeriesNormalization::kFactorial ? 1.0 / factorial : 1.0;
    for (std::size_t i = 0; i < 2; ++i) {
      out.values[i] += weight * term.values[i];
      out.term_norms[i].push_back(weight * term.values[i].cwiseAbs().maxCoeff());
    }
  }
  return out;
}

std::vector<TermGrid> ham_terms(const RegimeModel& model, double T, const HamConfig& config) {
  const HamGrid grid = make_ham_grid(config, T);
  std::vector<TermGrid> terms;
  terms.push_back(zeroth_term(model, grid, config));
  for (int m = 1; m <= config.m_trunc; ++m) terms.push_back(ham_step(terms.back(), model, config));
  return terms;
}

SeriesSurface ham_surface(const RegimeModel& model, double T, const HamConfig& config) {
  SeriesSurface surface = assemble_series(ham_terms(model, T, config), config.normalization);
  surface.terminal_mode = config.terminal_mode;
  return surface;
}

double surface_value(const SeriesSurface& surface, std::size_t regime, double u, double z) {
  const auto& g = surface.grid;
  if (regime > 1) throw Error(ErrorCode::kDomain, "regime index out of range");
  if (u < 0.0 || u > g.maturity() || z < g.z.front() || z > g.z.back()) {
    throw Error(ErrorCode::kExtrapolationRefused,
                "point (u=" + std::to_string(u) + ", z=" + std::to_string(z) +
                    ") lies outside the ham grid");
  }
  const auto& v = surface.values[regime];
  std::vector<double> along_u(g.u.size());
  for (std::size_t k = 0; k < g.u.size(); ++k) {
    std::vector<double> zs = g.z;
    std::vector<double> vs(g.z.size());
    for (std::size_t n = 0; n < g.z.size(); ++n) {
      vs[n] = v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
    }
    const boost::math::interpolators::pchip<std::vector<double>> in_z(std::move(zs),
                                                                       std::move(vs));
    along_u[k] = in_z(z);
  }
  std::vector<double> us = g.u;
  const boost::math::interpolators::pchip<std::vector<double>> in_u(std::move(us),
                                                                    std::move(along_u));
  return in_u(u);
}

HamPrice price_floating_put_ham(const MarketState& state, const SeriesSurface& surface) {
  const double T = surface.grid.maturity();
  if (!(state.s > 0.0)) throw Error(ErrorCode::kDomain, "spot must be > 0");
  if (state.a < 0.0) throw Error(ErrorCode::kDomain, "running integral must be >= 0");
  if (state.t < 0.0 || state.t > T) throw Error(ErrorCode::kDomain, "t outside [0, T]");
  if (state.regime > 1) throw Error(ErrorCode::kDomain, "regime index out of range");
  HamPrice out{};
  const double u = T - state.t;
  if (state.a == 0.0) {
    out.z = surface.grid.z.back();
    out.warnings.push_back("a = 0 maps to z = +inf; evaluated at z_max");
  } else {
    out.z = -std::log(state.a / state.s);
  }
  if (u == 0.0) {
    out.reduced_value = surface.terminal_mode == TerminalMode::kPayoff
                            ? std::max(state.y() / T - 1.0, 0.0)
                            : 0.0;
  } else {
    out.reduced_value = surface_value(surface, state.regime, u, out.z);
  }
  out.price = state.s * out.reduced_value;
  return out;
}

}  // namespace rsasian
