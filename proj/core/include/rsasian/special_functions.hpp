#pragma once

namespace rsasian {

/// Scaled complementary error function exp(x^2) erfc(x).
double erfcx(double x);

/// exp(a) * erfc(w) without intermediate overflow or underflow.
double exp_erfc(double a, double w);

double normal_cdf(double x);

double black_scholes_put(double spot, double strike, double maturity, double rate,
                         double dividend, double sigma);
double black_scholes_call(double spot, double strike, double maturity, double rate,
                          double dividend, double sigma);

}  // namespace rsasian
