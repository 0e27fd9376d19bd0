#include <gtest/gtest.h>

#include "rsasian/error.hpp"
#include "rsasian/model.hpp"
#include "support.hpp"

using namespace rsasian;

namespace {

std::string validation_message(RegimeModel m, ValidationOptions opts = {}) {
  try {
    validate_model(std::move(m), opts);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Model, AcceptsAsymmetricGenerator) {
  const RegimeModel m =
      validate_model({{0.05, 0.03}, {0.2, 0.3}, {}, {{-1.0, 1.0}, {2.0, -2.0}}});
  EXPECT_EQ(m.q, (std::vector<double>{0.0, 0.0}));
  EXPECT_DOUBLE_EQ(m.exit_rate(1), 2.0);
}

TEST(Model, NamesOffendingGeneratorRow) {
  EXPECT_EQ(validation_message({{0.05, 0.03}, {0.2, 0.3}, {}, {{-1.0, 1.0}, {1.0, -0.99}}}),
            "generator row 1 sums to 0.01");
}

TEST(Model, RejectsNegativeOffDiagonal) {
  const auto msg = validation_message({{0.05, 0.03}, {0.2, 0.3}, {}, {{1.0, -1.0}, {1.0, -1.0}}});
  EXPECT_NE(msg.find("negative off the diagonal"), std::string::npos) << msg;
}

TEST(Model, RejectsNonPositiveVolatilityAndRate) {
  EXPECT_EQ(validation_message({{0.05, 0.03}, {0.2, 0.0}, {}, {{-1.0, 1.0}, {1.0, -1.0}}}),
            "sigma[1] not > 0");
  EXPECT_EQ(validation_message({{0.0, 0.03}, {0.2, 0.3}, {}, {{-1.0, 1.0}, {1.0, -1.0}}}),
            "r[0] not > 0");
  ValidationOptions opts;
  opts.allow_zero_rates = true;
  EXPECT_EQ(validation_message({{0.0, 0.03}, {0.2, 0.3}, {}, {{-1.0, 1.0}, {1.0, -1.0}}}, opts),
            "");
}

TEST(Model, RejectsShapeMismatch) {
  EXPECT_NE(validation_message({{0.05}, {0.2, 0.3}, {}, {{-1.0, 1.0}, {1.0, -1.0}}}), "");
  EXPECT_NE(validation_message({{0.05, 0.03}, {0.2, 0.3}, {}, {{-1.0, 1.0}}}), "");
}

TEST(Model, LambdaIsNonPositiveAndGammaMatchesRate) {
  const RegimeModel m = testing_support::desk_model();
  const auto c0 = lambda_gamma(m, 0);
  EXPECT_DOUBLE_EQ(c0.lambda, -2.0 / 0.09);
  EXPECT_DOUBLE_EQ(c0.gamma, 0.1 / 0.09);
}

TEST(Model, ReducedCoordinatesRoundTrip) {
  const ReducedCoords rc = to_reduced_coords(0.25, 0.4, 1.0, 0.3);
  EXPECT_NEAR(rc.tau, 0.75 * 0.045, 1e-15);
  EXPECT_NEAR(rc.z, -std::log(0.4), 1e-15);
  const PhysicalCoords pc = from_reduced_coords(rc, 1.0, 0.3);
  EXPECT_NEAR(pc.t, 0.25, 1e-14);
  EXPECT_NEAR(pc.y, 0.4, 1e-14);
  EXPECT_THROW(to_reduced_coords(0.1, 0.0, 1.0, 0.3), Error);
}

TEST(Model, Payoffs) {
  AsianOptionSpec spec;
  spec.style = OptionStyle::kFloatingPut;
  spec.strike_multiplier = 1.1;
  EXPECT_NEAR(payoff(spec, 100.0, 120.0), 10.0, 1e-12);
  spec.style = OptionStyle::kFloatingCall;
  EXPECT_NEAR(payoff(spec, 100.0, 100.0), 10.0, 1e-12);
  spec.style = OptionStyle::kFixedPut;
  spec.K = 95.0;
  EXPECT_DOUBLE_EQ(payoff(spec, 1.0, 90.0), 5.0);
  spec.style = OptionStyle::kFixedCall;
  EXPECT_DOUBLE_EQ(payoff(spec, 1.0, 90.0), 0.0);
  spec.style = OptionStyle::kEuropeanPut;
  EXPECT_DOUBLE_EQ(payoff(spec, 90.0, 1e9), 5.0);
}

TEST(Model, StateValidation) {
  const RegimeModel m = testing_support::desk_model();
  AsianOptionSpec spec;
  EXPECT_THROW(validate_state({0.0, 100.0, 5.0, 0}, spec, m), Error);
  EXPECT_THROW(validate_state({0.5, 100.0, 5.0, 2}, spec, m), Error);
  EXPECT_THROW(validate_state({1.5, 100.0, 5.0, 0}, spec, m), Error);
  EXPECT_NO_THROW(validate_state({0.5, 100.0, 5.0, 1}, spec, m));
}

TEST(Model, StyleNamesRoundTrip) {
  for (auto s : {OptionStyle::kFloatingPut, OptionStyle::kFloatingCall, OptionStyle::kFixedPut,
                 OptionStyle::kFixedCall, OptionStyle::kEuropeanPut}) {
    EXPECT_EQ(option_style_from_string(to_string(s)), s);
  }
  EXPECT_THROW(option_style_from_string("asian"), Error);
}

TEST(Errors, NumericalClassification) {
  EXPECT_FALSE(is_numerical(ErrorCode::kValidation));
  EXPECT_FALSE(is_numerical(ErrorCode::kNotApplicable));
  EXPECT_TRUE(is_numerical(ErrorCode::kQuadratureNotConverged));
  EXPECT_TRUE(is_numerical(ErrorCode::kLinearSolveFailure));
}
