#include "rsasian/model.hpp"

#include <cmath>
#include <sstream>

#include "rsasian/error.hpp"

namespace rsasian {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kDegenerateVolatilities: return "DegenerateVolatilities";
    case ErrorCode::kQuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::kInterpolationOutOfRange: return "InterpolationOutOfRange";
    case ErrorCode::kExtrapolationRefused: return "ExtrapolationRefused";
    case ErrorCode::kNotApplicable: return "NotApplicable";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kLinearSolveFailure: return "LinearSolveFailure";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::kQuadratureNotConverged:
    case ErrorCode::kInterpolationOutOfRange:
    case ErrorCode::kLinearSolveFailure:
    case ErrorCode::kGridMismatch:
      return true;
    default:
      return false;
  }
}

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorCode::kValidation, message);
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

RegimeModel validate_model(RegimeModel raw, const ValidationOptions& options) {
  const std::size_t n = raw.sigma.size();
  if (n == 0) fail("model has no regimes");
  if (raw.r.size() != n) {
    fail("r has " + std::to_string(raw.r.size()) + " entries, expected " + std::to_string(n));
  }
  if (raw.q.empty()) raw.q.assign(n, 0.0);
  if (raw.q.size() != n) {
    fail("q has " + std::to_string(raw.q.size()) + " entries, expected " + std::to_string(n));
  }
  if (raw.gen.size() != n) {
    fail("generator has " + std::to_string(raw.gen.size()) + " rows, expected " +
         std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(raw.sigma[i] > 0.0) || !std::isfinite(raw.sigma[i])) {
      fail("sigma[" + std::to_string(i) + "] not > 0");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool ok = options.allow_zero_rates ? raw.r[i] >= 0.0 : raw.r[i] > 0.0;
    if (!ok || !std::isfinite(raw.r[i])) {
      fail("r[" + std::to_string(i) + (options.allow_zero_rates ? "] not >= 0" : "] not > 0"));
    }
    if (!std::isfinite(raw.q[i])) fail("q[" + std::to_string(i) + "] not finite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = raw.gen[i];
    if (row.size() != n) {
      fail("generator row " + std::to_string(i) + " has " + std::to_string(row.size()) +
           " entries, expected " + std::to_string(n));
    }
    double sum = 0.0;
    double scale = 0.0;
    for (double v : row) {
      if (!std::isfinite(v)) fail("generator row " + std::to_string(i) + " not finite");
      sum += v;
      scale = std::max(scale, std::abs(v));
    }
    if (std::abs(sum) > options.row_sum_tolerance * std::max(1.0, scale)) {
      fail("generator row " + std::to_string(i) + " sums to " + num(sum));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && row[j] < 0.0) {
        fail("generator entry (" + std::to_string(i) + "," + std::to_string(j) +
             ") is negative off the diagonal");
      }
    }
    if (row[i] > 0.0) fail("generator diagonal " + std::to_string(i) + " is positive");
  }
  return raw;
}

std::string_view to_string(OptionStyle style) {
  switch (style) {
    case OptionStyle::kFloatingPut: return "floating_put";
    case OptionStyle::kFloatingCall: return "floating_call";
    case OptionStyle::kFixedPut: return "fixed_put";
    case OptionStyle::kFixedCall: return "fixed_call";
    case OptionStyle::kEuropeanPut: return "european_put";
  }
  return "unknown";
}

OptionStyle option_style_from_string(std::string_view name) {
  for (auto s : {OptionStyle::kFloatingPut, OptionStyle::kFloatingCall, OptionStyle::kFixedPut,
                 OptionStyle::kFixedCall, OptionStyle::kEuropeanPut}) {
    if (to_string(s) == name) return s;
  }
  fail("unknown option style '" + std::string(name) + "'");
}

bool is_floating(OptionStyle style) {
  return style == OptionStyle::kFloatingPut || style == OptionStyle::kFloatingCall;
}

void validate_option(const AsianOptionSpec& spec) {
  if (!(spec.T > 0.0) || !std::isfinite(spec.T)) fail("T not > 0");
  if (!is_floating(spec.style) && !(spec.K > 0.0)) fail("K not > 0");
  if (is_floating(spec.style) && !(spec.strike_multiplier > 0.0)) {
    fail("strike_multiplier not > 0");
  }
}

void validate_state(const MarketState& state, const AsianOptionSpec& spec,
                    const RegimeModel& model) {
  if (!(state.t >= 0.0 && state.t <= spec.T)) fail("state.t outside [0, T]");
  if (!(state.s > 0.0)) fail("state.s not > 0");
  if (!(state.a >= 0.0)) fail("state.a negative");
  if (state.t == 0.0 && state.a != 0.0) fail("state.a must be 0 at t = 0");
  if (state.regime >= model.n_states()) {
    fail("state.regime " + std::to_string(state.regime) + " out of range");
  }
}

void require_two_states(const RegimeModel& model, std::string_view who) {
  if (model.n_states() != 2) {
    fail(std::string(who) + " requires a two-state model, got " +
         std::to_string(model.n_states()));
  }
}

RegimeCoefficients lambda_gamma(const RegimeModel& model, std::size_t i) {
  require_two_states(model, "lambda_gamma");
  const double var = model.sigma[i] * model.sigma[i];
  return {2.0 * model.gen[i][i] / var, 2.0 * model.r[i] / var};
}

ReducedCoords to_reduced_coords(double t, double y, double T, double sigma_i) {
  if (!(y > 0.0)) throw Error(ErrorCode::kDomain, "reduced coordinates need y > 0");
  if (!(t >= 0.0 && t <= T)) throw Error(ErrorCode::kDomain, "t outside [0, T]");
  return {(T - t) * sigma_i * sigma_i / 2.0, -std::log(y)};
}

PhysicalCoords from_reduced_coords(const ReducedCoords& reduced, double T, double sigma_i) {
  return {T - 2.0 * reduced.tau / (sigma_i * sigma_i), std::exp(-reduced.z)};
}

double payoff(const AsianOptionSpec& spec, double s_T, double avg_T) {
  const double m = spec.strike_multiplier;
  switch (spec.style) {
    case OptionStyle::kFloatingPut: return std::max(avg_T - m * s_T, 0.0);
    case OptionStyle::kFloatingCall: return std::max(m * s_T - avg_T, 0.0);
    case OptionStyle::kFixedPut: return std::max(spec.K - avg_T, 0.0);
    case OptionStyle::kFixedCall: return std::max(avg_T - spec.K, 0.0);
    case OptionStyle::kEuropeanPut: return std::max(spec.K - s_T, 0.0);
  }
  return 0.0;
}

}  // namespace rsasian
