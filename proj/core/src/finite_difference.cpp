#include "rsasian/finite_difference.hpp"

#include <Eigen/Sparse>
#include <algorithm>
// pchip.hpp calls isnan unqualified and relies on this header being seen first.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "rsasian/error.hpp"

namespace rsasian {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Space operator of V_tau = L V on the interleaved unknowns (node k, regime i) -> k N + i.
SpMat space_operator(const RegimeModel& model, const std::vector<double>& y, bool with_coupling,
                     FdLowerBoundary lower) {
  const auto N = static_cast<Eigen::Index>(model.n_states());
  const auto n_nodes = static_cast<Eigen::Index>(y.size());
  const double h = y[1] - y[0];
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n_nodes * N * (3 + N)));
  auto idx = [N](Eigen::Index k, Eigen::Index i) { return k * N + i; };

  for (Eigen::Index i = 0; i < N; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double sig2 = model.sigma[ui] * model.sigma[ui];
    const double carry = model.r[ui] - model.dividend(ui);
    const double q = model.dividend(ui);
    for (Eigen::Index k = 0; k < n_nodes; ++k) {
      const Eigen::Index row = idx(k, i);
      const double yk = y[static_cast<std::size_t>(k)];
      const double b = 1.0 - carry * yk;
      if (k == 0) {
        if (lower == FdLowerBoundary::kDirichletZero) continue;
        trip.emplace_back(row, idx(0, i), -1.5 / h);
        trip.emplace_back(row, idx(1, i), 2.0 / h);
        trip.emplace_back(row, idx(2, i), -0.5 / h);
      } else if (k == n_nodes - 1) {
        // V_yy = 0 at the far field leaves the first-order part.
        trip.emplace_back(row, idx(k, i), 1.5 * b / h);
        trip.emplace_back(row, idx(k - 1, i), -2.0 * b / h);
        trip.emplace_back(row, idx(k - 2, i), 0.5 * b / h);
      } else {
        const double a = 0.5 * sig2 * yk * yk;
        trip.emplace_back(row, idx(k - 1, i), a / (h * h) - b / (2.0 * h));
        trip.emplace_back(row, idx(k, i), -2.0 * a / (h * h));
        trip.emplace_back(row, idx(k + 1, i), a / (h * h) + b / (2.0 * h));
      }
      if (q != 0.0) trip.emplace_back(row, row, -q);
      if (with_coupling) {
        for (Eigen::Index j = 0; j < N; ++j) {
          const double g = model.gen[ui][static_cast<std::size_t>(j)];
          if (g != 0.0) trip.emplace_back(row, idx(k, j), g);
        }
      }
    }
  }
  SpMat L(n_nodes * N, n_nodes * N);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

}  // namespace

std::string_view to_string(FdCoupling c) {
  return c == FdCoupling::kImplicitBlock ? "implicit_block" : "strang";
}
std::string_view to_string(FdLowerBoundary b) {
  return b == FdLowerBoundary::kDegeneratePde ? "degenerate_pde" : "dirichlet_zero";
}
FdCoupling fd_coupling_from_string(std::string_view name) {
  if (name == "implicit_block") return FdCoupling::kImplicitBlock;
  if (name == "strang") return FdCoupling::kStrang;
  throw Error(ErrorCode::kValidation, "unknown fd coupling '" + std::string(name) + "'");
}
FdLowerBoundary fd_lower_boundary_from_string(std::string_view name) {
  if (name == "degenerate_pde") return FdLowerBoundary::kDegeneratePde;
  if (name == "dirichlet_zero") return FdLowerBoundary::kDirichletZero;
  throw Error(ErrorCode::kValidation, "unknown fd lower boundary '" + std::string(name) + "'");
}

double default_y_max(double T, double y0) { return std::max(4.0 * T, 4.0 * y0 + 4.0 * T); }

void validate_fd_config(const FdConfig& cfg, double T) {
  if (cfg.n_y < 3) throw Error(ErrorCode::kValidation, "n_y not >= 3");
  if (cfg.n_t < 3) throw Error(ErrorCode::kValidation, "n_t not >= 3");
  if (cfg.y_max && !(*cfg.y_max > T)) throw Error(ErrorCode::kValidation, "y_max not > T");
  if (cfg.rannacher_half_steps % 2 != 0) {
    throw Error(ErrorCode::kValidation, "rannacher_half_steps not even");
  }
  if (cfg.rannacher_half_steps / 2 > cfg.n_t) {
    throw Error(ErrorCode::kValidation, "rannacher_half_steps exceed 2 n_t");
  }
  if (cfg.retain_every < 1) throw Error(ErrorCode::kValidation, "retain_every not >= 1");
}

FdSurface fd_price(const RegimeModel& model, double T, const FdConfig& cfg, double y0,
                   double multiplier) {
  validate_fd_config(cfg, T);
  if (model.n_states() < 1) throw Error(ErrorCode::kValidation, "model has no states");
  const std::size_t N = model.n_states();
  const double y_max = cfg.y_max.value_or(default_y_max(T, y0));
  if (y0 < 0.0 || y0 > y_max) throw Error(ErrorCode::kDomain, "y0 outside [0, y_max]");

  FdSurface out;
  out.multiplier = multiplier;
  out.y.resize(cfg.n_y + 1);
  const double h = y_max / static_cast<double>(cfg.n_y);
  for (std::size_t k = 0; k <= cfg.n_y; ++k) out.y[k] = static_cast<double>(k) * h;
  out.y.back() = y_max;

  const bool split = cfg.coupling == FdCoupling::kStrang;
  const SpMat L = space_operator(model, out.y, !split, cfg.lower);
  const double dt = T / static_cast<double>(cfg.n_t);
  SpMat I(L.rows(), L.cols());
  I.setIdentity();
  const SpMat lhs = I - 0.5 * dt * L;
  const SpMat rhs = I + 0.5 * dt * L;
  Eigen::SparseLU<SpMat> lu;
  lu.compute(lhs);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::kLinearSolveFailure, "fd: factorisation failed");
  }

  Eigen::MatrixXd coupling_half;
  if (split) {
    Eigen::MatrixXd Q(N, N);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = model.gen[i][j];
      }
    }
    coupling_half = (0.5 * dt * Q).exp();
  }
  auto apply_coupling = [&](Eigen::VectorXd& v) {
    Eigen::Map<Eigen::MatrixXd> nodes(v.data(), static_cast<Eigen::Index>(N),
                                      static_cast<Eigen::Index>(cfg.n_y + 1));
    nodes = coupling_half * nodes;
  };

  Eigen::VectorXd v(static_cast<Eigen::Index>((cfg.n_y + 1) * N));
  for (std::size_t k = 0; k <= cfg.n_y; ++k) {
    const double pay = std::max(out.y[k] / T - multiplier, 0.0);
    for (std::size_t i = 0; i < N; ++i) v(static_cast<Eigen::Index>(k * N + i)) = pay;
  }

  std::vector<Eigen::VectorXd> levels{v};
  out.t.push_back(T);
  auto solve = [&](const Eigen::VectorXd& b) {
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
      throw Error(ErrorCode::kLinearSolveFailure, "fd: solve failed");
    }
    return x;
  };

  const std::size_t implicit_steps = cfg.rannacher_half_steps / 2;
  for (std::size_t s = 1; s <= cfg.n_t; ++s) {
    if (split) apply_coupling(v);
    if (s <= implicit_steps) {
      v = solve(v);
      v = solve(v);
    } else {
      v = solve(rhs * v);
    }
    if (split) apply_coupling(v);
    if (s % cfg.retain_every == 0 || s == cfg.n_t) {
      levels.push_back(v);
      out.t.push_back(s == cfg.n_t ? 0.0 : T - static_cast<double>(s) * dt);
    }
  }

  out.values.assign(N, Eigen::MatrixXd(static_cast<Eigen::Index>(levels.size()),
                                        static_cast<Eigen::Index>(cfg.n_y + 1)));
  for (std::size_t l = 0; l < levels.size(); ++l) {
    for (std::size_t k = 0; k <= cfg.n_y; ++k) {
      for (std::size_t i = 0; i < N; ++i) {
        out.values[i](static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) =
            levels[l](static_cast<Eigen::Index>(k * N + i));
      }
    }
  }
  return out;
}

double fd_value_at(const FdSurface& surface, std::size_t regime, double y) {
  if (regime >= surface.values.size()) throw Error(ErrorCode::kDomain, "regime out of range");
  if (y < 0.0 || y > surface.y.back()) {
    throw Error(ErrorCode::kExtrapolationRefused, "y outside the fd grid");
  }
  const auto& vals = surface.values[regime];
  const Eigen::Index last = vals.rows() - 1;
  const double h = surface.y[1] - surface.y[0];
  const double pos = y / h;
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-12) return vals(last, static_cast<Eigen::Index>(nearest));
  std::vector<double> ys = surface.y;
  std::vector<double> vs(surface.y.size());
  for (std::size_t k = 0; k < vs.size(); ++k) vs[k] = vals(last, static_cast<Eigen::Index>(k));
  const boost::math::interpolators::pchip<std::vector<double>> interp(std::move(ys),
                                                                      std::move(vs));
  return interp(y);
}

double fd_dollar_price(const FdSurface& surface, const MarketState& state) {
  if (state.t != surface.t.back()) {
    throw Error(ErrorCode::kDomain, "fd surface is solved to t = 0 only");
  }
  return state.s * fd_value_at(surface, state.regime, state.y());
}

FdRichardson fd_richardson(const RegimeModel& model, double T, const FdConfig& cfg,
                           std::size_t regime, double y0, double multiplier) {
  FdRichardson out{};
  FdConfig run = cfg;
  run.retain_every = std::max<std::size_t>(cfg.n_t * 4, 1);
  // Keep y_max fixed across resolutions.
  run.y_max = cfg.y_max.value_or(default_y_max(T, y0));
  for (const std::size_t factor : {1, 2, 4}) {
    run.n_y = cfg.n_y * factor / 2;
    run.n_t = cfg.n_t * factor / 2;
    out.n_y.push_back(run.n_y);
    out.values.push_back(fd_value_at(fd_price(model, T, run, y0, multiplier), regime, y0));
  }
  out.ratio = (out.values[0] - out.values[1]) / (out.values[1] - out.values[2]);
  out.order = std::log2(std::abs(out.ratio));
  out.relative_change = std::abs(out.values[2] - out.values[1]) / std::abs(out.values[2]);
  return out;
}

double max_decrease_in_y(const FdSurface& surface) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& vals : surface.values) {
    for (Eigen::Index l = 0; l < vals.rows(); ++l) {
      for (Eigen::Index k = 0; k + 1 < vals.cols(); ++k) {
        worst = std::max(worst, vals(l, k) - vals(l, k + 1));
      }
    }
  }
  return worst;
}

}  // namespace rsasian
