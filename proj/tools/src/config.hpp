#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rsasian/european_rs.hpp"
#include "rsasian/finite_difference.hpp"
#include "rsasian/ham.hpp"
#include "rsasian/model.hpp"
#include "rsasian/monte_carlo.hpp"

namespace pricer {

inline constexpr int kSchemaVersion = 1;

struct HamBlock {
  rsasian::HamConfig config;
  std::vector<int> m_list;  // compare only: one report row per entry
};

struct FdBlock {
  rsasian::FdConfig config;
  bool richardson = true;
};

struct EuropeanBlock {
  rsasian::QuadratureSpec quadrature;
  rsasian::EuropeanOptions options;
};

struct OutputBlock {
  std::string format = "csv";
  std::optional<std::string> path;
  bool timing = false;
};

struct RunConfig {
  rsasian::RegimeModel model;
  rsasian::AsianOptionSpec option;
  rsasian::MarketState state;
  std::string method;  // ham | mc | fd | european_rs | compare
  std::optional<HamBlock> ham;
  std::optional<FdBlock> fd;
  std::optional<rsasian::McConfig> mc;
  std::optional<EuropeanBlock> european;
  std::vector<std::string> symmetry_starts{"given", "stationary"};
  OutputBlock output;
};

/// Thrown with every schema violation, each prefixed by its field path.
struct ConfigError {
  std::vector<std::string> messages;
};

RunConfig parse_config(const nlohmann::json& doc);

/// Every field with its default filled in; parsing it yields the same RunConfig.
nlohmann::json effective_config(const RunConfig& cfg);

}  // namespace pricer
