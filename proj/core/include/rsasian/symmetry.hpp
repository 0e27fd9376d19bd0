#pragma once

#include <string>
#include <string_view>

#include "rsasian/model.hpp"
#include "rsasian/monte_carlo.hpp"

namespace rsasian {

/// Contract and market on the other side of the fixed/floating equivalence.
struct Counterpart {
  AsianOptionSpec spec;
  RegimeModel model;  // rates and dividend yields exchanged
};

/// floating call (multiplier m) <-> fixed put (strike m S0) and
/// fixed call (strike K) <-> floating put (multiplier K / S0), with r' = q and
/// q' = r. Only for contracts written at t = 0 with a = 0 (kNotApplicable otherwise).
Counterpart symmetric_counterpart(const AsianOptionSpec& spec, const MarketState& state,
                                  const RegimeModel& model);

/// "C_f(100, 1, r, 0, 0, 1)": (spot, strike-or-multiplier, rate role, dividend
/// role, start time, maturity). Roles print "r" for the reference rate vector,
/// "0" for zeros and the values otherwise.
std::string six_argument_notation(const AsianOptionSpec& spec, double spot,
                                  const RegimeModel& model, const RegimeModel& reference);

struct SymmetryCheck {
  std::string lhs;
  std::string rhs;
  McEstimate lhs_estimate;
  McEstimate rhs_estimate;
  double z_score;  // difference over the combined standard error
};

/// Prices both sides by Monte Carlo; the right side uses seed + 1.
SymmetryCheck check_symmetry(const AsianOptionSpec& spec, const MarketState& state,
                             const RegimeModel& model, const McConfig& cfg);

}  // namespace rsasian
