#include "rsasian/symmetry.hpp"

#include <cmath>
#include <sstream>

#include "rsasian/error.hpp"

namespace rsasian {

namespace {

std::vector<double> dividends_of(const RegimeModel& model) {
  std::vector<double> q(model.n_states());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = model.dividend(i);
  return q;
}

std::string role(const std::vector<double>& values, const RegimeModel& reference) {
  if (values == reference.r) return "r";
  bool zero = true;
  for (double v : values) zero = zero && v == 0.0;
  if (zero) return "0";
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? " " : "") << values[i];
  os << ')';
  return os.str();
}

std::string_view symbol(OptionStyle style) {
  switch (style) {
    case OptionStyle::kFloatingCall: return "C_f";
    case OptionStyle::kFloatingPut: return "P_f";
    case OptionStyle::kFixedCall: return "C_x";
    case OptionStyle::kFixedPut: return "P_x";
    case OptionStyle::kEuropeanPut: return "P_e";
  }
  return "?";
}

}  // namespace

Counterpart symmetric_counterpart(const AsianOptionSpec& spec, const MarketState& state,
                                  const RegimeModel& model) {
  validate_option(spec);
  if (state.t != 0.0 || state.a != 0.0) {
    throw Error(ErrorCode::kNotApplicable, "symmetry holds for contracts at t = 0 with a = 0");
  }
  if (!(state.s > 0.0)) throw Error(ErrorCode::kDomain, "spot must be > 0");
  Counterpart out{spec, model};
  out.model.r = dividends_of(model);
  out.model.q = model.r;
  const double s0 = state.s;
  switch (spec.style) {
    case OptionStyle::kFloatingCall:
      out.spec = {OptionStyle::kFixedPut, spec.T, spec.strike_multiplier * s0, 1.0};
      break;
    case OptionStyle::kFixedPut:
      out.spec = {OptionStyle::kFloatingCall, spec.T, 0.0, spec.K / s0};
      break;
    case OptionStyle::kFixedCall:
      out.spec = {OptionStyle::kFloatingPut, spec.T, 0.0, spec.K / s0};
      break;
    case OptionStyle::kFloatingPut:
      out.spec = {OptionStyle::kFixedCall, spec.T, spec.strike_multiplier * s0, 1.0};
      break;
    case OptionStyle::kEuropeanPut:
      throw Error(ErrorCode::kNotApplicable, "no Asian counterpart for a European put");
  }
  return out;
}

std::string six_argument_notation(const AsianOptionSpec& spec, double spot,
                                  const RegimeModel& model, const RegimeModel& reference) {
  std::ostringstream os;
  const double second = is_floating(spec.style) ? spec.strike_multiplier : spec.K;
  os << symbol(spec.style) << '(' << spot << ", " << second << ", " << role(model.r, reference)
     << ", " << role(dividends_of(model), reference) << ", 0, " << spec.T << ')';
  return os.str();
}

SymmetryCheck check_symmetry(const AsianOptionSpec& spec, const MarketState& state,
                             const RegimeModel& model, const McConfig& cfg) {
  const Counterpart other = symmetric_counterpart(spec, state, model);
  McConfig right = cfg;
  right.seed = cfg.seed + 1;
  SymmetryCheck out;
  out.lhs = six_argument_notation(spec, state.s, model, model);
  out.rhs = six_argument_notation(other.spec, state.s, other.model, model);
  out.lhs_estimate = mc_price(spec, state, model, cfg);
  out.rhs_estimate = mc_price(other.spec, state, other.model, right);
  const double se = std::hypot(out.lhs_estimate.std_error, out.rhs_estimate.std_error);
  const double diff = out.lhs_estimate.price - out.rhs_estimate.price;
  out.z_score = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY);
  return out;
}

}  // namespace rsasian
