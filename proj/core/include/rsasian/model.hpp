#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rsasian {

/// Markov-modulated market: per-regime short rate, volatility and dividend
/// yield plus the generator of the regime chain.
///
/// `gen[i][j]` (i != j) is the rate of jumping from regime i to regime j and
/// `gen[i][i] = -sum_{j != i} gen[i][j]`, so every row sums to zero. All
/// quantities are per year.
struct RegimeModel {
  std::vector<double> r;
  std::vector<double> sigma;
  std::vector<double> q;  // empty means all zero
  std::vector<std::vector<double>> gen;

  std::size_t n_states() const { return sigma.size(); }
  double dividend(std::size_t i) const { return q.empty() ? 0.0 : q[i]; }
  double exit_rate(std::size_t i) const { return -gen[i][i]; }
};

struct ValidationOptions {
  // The counterpart models of the fixed/floating symmetry carry zero rates.
  bool allow_zero_rates = false;
  double row_sum_tolerance = 1e-12;
};

/// Returns `raw` (with q filled in) when every invariant holds. Throws
/// Error(kValidation) naming the first violated invariant otherwise.
RegimeModel validate_model(RegimeModel raw, const ValidationOptions& options = {});

enum class OptionStyle { kFloatingPut, kFloatingCall, kFixedPut, kFixedCall, kEuropeanPut };

std::string_view to_string(OptionStyle style);
OptionStyle option_style_from_string(std::string_view name);
bool is_floating(OptionStyle style);

/// Contract descriptor. Averaging is continuous and arithmetic over [0, T].
/// For floating styles `strike_multiplier` scales the terminal spot:
/// put pays (A_T/T - m S_T)^+, call pays (m S_T - A_T/T)^+.
struct AsianOptionSpec {
  OptionStyle style = OptionStyle::kFloatingPut;
  double T = 1.0;
  double K = 0.0;
  double strike_multiplier = 1.0;
};

void validate_option(const AsianOptionSpec& spec);

/// Valuation point: time t, spot s, running integral a = int_0^t S_u du and
/// the current regime index (0-based).
struct MarketState {
  double t = 0.0;
  double s = 0.0;
  double a = 0.0;
  std::size_t regime = 0;

  double y() const { return a / s; }
};

void validate_state(const MarketState& state, const AsianOptionSpec& spec,
                    const RegimeModel& model);

struct RegimeCoefficients {
  double lambda;  // 2 a_ii / sigma_i^2 (non-positive)
  double gamma;   // 2 r_i / sigma_i^2
};

/// Coefficients of the transformed two-state system for regime `i`.
RegimeCoefficients lambda_gamma(const RegimeModel& model, std::size_t i);

struct ReducedCoords {
  double tau;  // (T - t) sigma_i^2 / 2
  double z;    // -ln(y)
};

ReducedCoords to_reduced_coords(double t, double y, double T, double sigma_i);

struct PhysicalCoords {
  double t;
  double y;
};

PhysicalCoords from_reduced_coords(const ReducedCoords& reduced, double T, double sigma_i);

/// Terminal payoff given the terminal spot and the realised average A_T / T.
double payoff(const AsianOptionSpec& spec, double s_T, double avg_T);

void require_two_states(const RegimeModel& model, std::string_view who);

}  // namespace rsasian
