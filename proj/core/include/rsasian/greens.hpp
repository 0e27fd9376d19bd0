#pragma once

namespace rsasian {

/// Exponent of the erfc correction: the dimensionally consistent
/// (1 - gamma)^2 tau / 4, or (1 - gamma)^2 / 4 without tau.
enum class GreensVariant { kWithTau, kWithoutTau };

/// Half-line heat kernel with the boundary u_z + (1 - gamma)/2 u = 0 at z = 0:
///   (4 pi tau)^{-1/2} [e^{-(z-xi)^2/4tau} + e^{-(z+xi)^2/4tau}]
///   + (1-gamma)/2 e^{E - (1-gamma)(z+xi)/2} erfc((z+xi)/(2 sqrt tau) - (1-gamma) sqrt(tau)/2)
/// with E chosen by `variant`. Throws kDomain when tau <= 0.
double greens_function(double tau, double z, double xi, double gamma,
                       GreensVariant variant = GreensVariant::kWithTau);

/// Only the erfc correction term of greens_function.
double greens_boundary_term(double tau, double z, double xi, double gamma,
                            GreensVariant variant = GreensVariant::kWithTau);

}  // namespace rsasian
