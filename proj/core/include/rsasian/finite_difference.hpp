#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rsasian/model.hpp"

namespace rsasian {

enum class FdCoupling { kImplicitBlock, kStrang };
/// Condition at y = 0: the PDE itself, where the diffusion degenerates and
/// only V_t + V_y + coupling = 0 remains, or the literal V = 0.
enum class FdLowerBoundary { kDegeneratePde, kDirichletZero };

std::string_view to_string(FdCoupling c);
std::string_view to_string(FdLowerBoundary b);
FdCoupling fd_coupling_from_string(std::string_view name);
FdLowerBoundary fd_lower_boundary_from_string(std::string_view name);

struct FdConfig {
  std::optional<double> y_max;  // default max(4T, 4 y0 + 4T)
  std::size_t n_y = 1600;       // intervals in y
  std::size_t n_t = 1600;       // time steps
  FdCoupling coupling = FdCoupling::kImplicitBlock;
  FdLowerBoundary lower = FdLowerBoundary::kDegeneratePde;
  std::size_t rannacher_half_steps = 4;  // implicit half steps before Crank-Nicolson
  std::size_t retain_every = 1;          // keep every k-th time level (t = 0 always kept)
};

void validate_fd_config(const FdConfig& cfg, double T);
double default_y_max(double T, double y0);

/// Reduced floating-put values V_i(t, y); the dollar price is s V_i(t, a/s).
struct FdSurface {
  std::vector<double> y;
  std::vector<double> t;                // retained levels, decreasing from T to 0
  std::vector<Eigen::MatrixXd> values;  // per regime, (level, y)
  double multiplier = 1.0;
};

/// Crank-Nicolson in t on [0, y_max] for the payoff (y/T - multiplier)^+.
FdSurface fd_price(const RegimeModel& model, double T, const FdConfig& cfg, double y0 = 0.0,
                   double multiplier = 1.0);

/// V_regime(0, y) by cubic interpolation between grid nodes (exact at nodes).
double fd_value_at(const FdSurface& surface, std::size_t regime, double y);

/// Dollar price s V_regime(t0, a/s) for a state at t = 0 of the surface.
double fd_dollar_price(const FdSurface& surface, const MarketState& state);

struct FdRichardson {
  std::vector<std::size_t> n_y;  // three resolutions
  std::vector<double> values;    // reduced values at y0
  double ratio;                  // (v0 - v1) / (v1 - v2)
  double order;                  // log2(ratio)
  double relative_change;        // |v2 - v1| / |v2|
};

/// Reruns the solver with both spacings halved twice, starting from cfg.
FdRichardson fd_richardson(const RegimeModel& model, double T, const FdConfig& cfg,
                           std::size_t regime, double y0 = 0.0, double multiplier = 1.0);

/// Largest decrease V(t, y_k) - V(t, y_{k+1}) over all levels and regimes
/// (<= 0 means nondecreasing in y).
double max_decrease_in_y(const FdSurface& surface);

}  // namespace rsasian
