#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsasian/greens.hpp"
#include "rsasian/model.hpp"
#include "rsasian/quadrature.hpp"

namespace rsasian {

/// `kPayoff` makes the assembled surface start from (e^{-z}/T - 1)^+;
/// `kZero` imposes V(0, z) = 0 on it literally.
enum class TerminalMode { kZero, kPayoff };
enum class InitialGuessMode { kEuropeanRs, kZero };
/// Weight of term m in the assembled series: 1/m! or 1.
enum class SeriesNormalization { kFactorial, kUnit };

std::string_view to_string(TerminalMode mode);
std::string_view to_string(InitialGuessMode mode);
std::string_view to_string(SeriesNormalization mode);
TerminalMode terminal_mode_from_string(std::string_view name);
InitialGuessMode initial_guess_mode_from_string(std::string_view name);
SeriesNormalization series_normalization_from_string(std::string_view name);

struct HamConfig {
  int m_trunc = 4;
  std::size_t n_z = 401;
  std::size_t n_u = 101;
  // Unset bounds default to [-ln(20 T), -ln(1e-4)].
  std::optional<double> z_min;
  std::optional<double> z_max;
  // Source samples are spline-interpolated onto a grid this many times finer
  // in xi before the kernel integrals.
  std::size_t xi_refine = 4;
  TerminalMode terminal_mode = TerminalMode::kPayoff;
  InitialGuessMode initial_guess_mode = InitialGuessMode::kEuropeanRs;
  GreensVariant greens = GreensVariant::kWithTau;
  SeriesNormalization normalization = SeriesNormalization::kFactorial;
  // n_rho is the minimum node count of the European guess integral.
  QuadratureSpec quadrature{};
};

void validate_ham_config(const HamConfig& config);

/// Uniform grids. The z grid is shifted so that z = 0 is the node `zero_index`.
struct HamGrid {
  std::vector<double> z;
  std::vector<double> u;
  std::size_t zero_index = 0;
  double dz = 0.0;
  double du = 0.0;

  double maturity() const { return u.back(); }
};

HamGrid make_ham_grid(const HamConfig& config, double T);

/// One series term on the grid; matrices are indexed (u, z).
struct TermGrid {
  int m = 0;
  HamGrid grid;
  std::array<Eigen::MatrixXd, 2> values;
  std::array<Eigen::MatrixXd, 2> d_dz;
};

/// Fourth-order central differences along z, one-sided five-point at the ends.
Eigen::MatrixXd derivative_z(const Eigen::MatrixXd& values, double dz);

/// European regime-switching put in reduced units: (1/T) P_i(S = T, K = e^{-z}, u).
TermGrid initial_guess(const RegimeModel& model, const HamGrid& grid, InitialGuessMode mode,
                       const QuadratureSpec& quad = {});

/// Solution of L_i V = 0 from V(0, z) = (e^{-z}/T - 1)^+, i.e. a call on y with
/// strike T, zero rate and dividend r_i, divided by T.
TermGrid homogeneous_payoff(const RegimeModel& model, const HamGrid& grid);

/// Term 0 of the series: the guess corrected so that the assembled surface
/// starts from the payoff (kPayoff) or from zero (kZero).
TermGrid zeroth_term(const RegimeModel& model, const HamGrid& grid, const HamConfig& config);

/// max over grid interior of |L_i guess| per regime, by finite differences.
std::array<double, 2> operator_residual(const RegimeModel& model, const TermGrid& term);

/// Intermediate quantities of one recursion step in the heat variables.
struct StepDetail {
  std::array<Eigen::MatrixXd, 2> hat;     // V-hat_i(u, z)
  std::array<Eigen::MatrixXd, 2> source;  // right-hand side of the heat equation
  std::array<double, 2> tail_ratio{};     // |source at xi_max| / max |source|
};

TermGrid ham_step(const TermGrid& prev, const RegimeModel& model, const HamConfig& config,
                  StepDetail* detail = nullptr);

struct SeriesSurface {
  HamGrid grid;
  std::array<Eigen::MatrixXd, 2> values;
  // sup-norm of each weighted term, per regime
  std::array<std::vector<double>, 2> term_norms;
  // Used only for the exact u = 0 row when pricing.
  TerminalMode terminal_mode = TerminalMode::kPayoff;
};

SeriesSurface assemble_series(const std::vector<TermGrid>& terms,
                              SeriesNormalization normalization = SeriesNormalization::kFactorial);

/// Terms 0..m_trunc.
std::vector<TermGrid> ham_terms(const RegimeModel& model, double T, const HamConfig& config);

/// Terms plus assembly in one call.
SeriesSurface ham_surface(const RegimeModel& model, double T, const HamConfig& config);

struct HamPrice {
  double price;
  double reduced_value;
  double z;  // evaluation point, clamped to z_max when a = 0
  std::vector<std::string> warnings;
};

/// s * V_regime(T - t, -ln(a/s)) interpolated on the surface.
HamPrice price_floating_put_ham(const MarketState& state, const SeriesSurface& surface);

/// Reduced value V_regime(u, z) with monotone cubic interpolation in u and z.
double surface_value(const SeriesSurface& surface, std::size_t regime, double u, double z);

}  // namespace rsasian
