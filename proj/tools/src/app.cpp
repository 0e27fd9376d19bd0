#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <variant>

#include "config.hpp"
#include "rsasian/error.hpp"
#include "rsasian/symmetry.hpp"

namespace pricer {

using nlohmann::json;
using namespace rsasian;

namespace {

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "NA";
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

json json_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return nullptr;
  if (const auto* d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? json(*d) : json(format_number(*d));
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string render(const Table& t, const std::string& format, const std::string& command) {
  if (format == "json") {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::object();
      for (std::size_t k = 0; k < t.columns.size(); ++k) r[t.columns[k]] = json_cell(row[k]);
      rows.push_back(r);
    }
    return json{{"command", command}, {"rows", rows}}.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t k = 0; k < t.columns.size(); ++k) out += (k ? "," : "") + t.columns[k];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + csv_cell(row[k]);
    out += "\n";
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

std::string number_list(const std::vector<double>& values) {
  std::vector<std::string> parts;
  for (double v : values) parts.push_back(format_number(v));
  return join(parts, "|");
}

// Wall time of `body` in ms, or NA when timing is off so reports stay reproducible.
Cell timed(bool timing, const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  if (!timing) return std::monostate{};
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kNotApplicable, message);
}

void require_ham_contract(const RunConfig& cfg) {
  require(cfg.option.style == OptionStyle::kFloatingPut,
          "ham prices the floating-strike put only");
  require(cfg.option.strike_multiplier == 1.0, "ham requires multiplier = 1");
}

const std::vector<std::string> kPriceColumns{"method",    "price",      "error_estimate",
                                             "std_error", "runtime_ms", "diagnostics"};

void add_ham_rows(const RunConfig& cfg, Table& table) {
  require_ham_contract(cfg);
  const HamBlock& block = *cfg.ham;
  std::vector<TermGrid> terms;
  const Cell runtime = timed(cfg.output.timing, [&] {
    terms = ham_terms(cfg.model, cfg.option.T, block.config);
  });
  std::vector<double> prices;
  for (int m = 0; m <= block.config.m_trunc; ++m) {
    std::vector<TermGrid> head(terms.begin(), terms.begin() + m + 1);
    SeriesSurface surface = assemble_series(head, block.config.normalization);
    surface.terminal_mode = block.config.terminal_mode;
    prices.push_back(price_floating_put_ham(cfg.state, surface).price);
  }
  SeriesSurface full = assemble_series(terms, block.config.normalization);
  full.terminal_mode = block.config.terminal_mode;
  const HamPrice final_price = price_floating_put_ham(cfg.state, full);
  for (int m : block.m_list) {
    const auto idx = static_cast<std::size_t>(m);
    std::vector<std::string> diag{
        "terminal_mode=" + std::string(to_string(block.config.terminal_mode)),
        "initial_guess=" + std::string(to_string(block.config.initial_guess_mode)),
        "term_norms_0=" + number_list({full.term_norms[0].begin(),
                                       full.term_norms[0].begin() + m + 1}),
        "term_norms_1=" + number_list({full.term_norms[1].begin(),
                                       full.term_norms[1].begin() + m + 1}),
        "z=" + format_number(final_price.z)};
    for (const auto& w : final_price.warnings) diag.push_back("warning=" + w);
    const Cell error = m > 0 ? Cell(std::abs(prices[idx] - prices[idx - 1])) : Cell{};
    table.rows.push_back({"ham(M=" + std::to_string(m) + ")", prices[idx], error,
                          std::monostate{}, runtime, join(diag, ";")});
  }
}

void add_mc_row(const RunConfig& cfg, Table& table) {
  McEstimate est{};
  const Cell runtime = timed(cfg.output.timing, [&] {
    est = mc_price(cfg.option, cfg.state, cfg.model, *cfg.mc);
  });
  const std::vector<std::string> diag{
      "n_paths=" + std::to_string(est.n_paths),
      "std_error=" + format_number(est.std_error),
      "start=" + std::string(cfg.mc->start == StartLaw::kGiven ? "given" : "stationary")};
  table.rows.push_back({std::string("mc"), est.price, 3.0 * est.std_error, est.std_error, runtime,
                        join(diag, ";")});
}

void add_fd_row(const RunConfig& cfg, Table& table) {
  require(cfg.option.style == OptionStyle::kFloatingPut, "fd prices the floating-strike put only");
  const FdBlock& block = *cfg.fd;
  // The remaining horizon T' = T - t is solved directly: with averaging
  // denominator T the payoff is (T'/T) (y/T' - m T/T')^+.
  const double horizon = cfg.option.T - cfg.state.t;
  require(horizon > 0.0, "fd needs t < T");
  const double scale = horizon / cfg.option.T;
  const double multiplier = cfg.option.strike_multiplier / scale;
  const double y0 = cfg.state.y();
  FdConfig run = block.config;
  if (cfg.state.t != 0.0 || !run.y_max) run.y_max = default_y_max(horizon, y0);
  double price = 0.0;
  Cell error;
  std::vector<std::string> diag;
  const Cell runtime = timed(cfg.output.timing, [&] {
    const FdSurface surface = fd_price(cfg.model, horizon, run, y0, multiplier);
    MarketState at_zero = cfg.state;
    at_zero.t = 0.0;
    price = scale * fd_dollar_price(surface, at_zero);
    diag.push_back("max_decrease_in_y=" + format_number(max_decrease_in_y(surface)));
    if (block.richardson) {
      const FdRichardson rich =
          fd_richardson(cfg.model, horizon, run, cfg.state.regime, y0, multiplier);
      error = scale * cfg.state.s * std::abs(rich.values[2] - rich.values[1]);
      diag.push_back("richardson_ratio=" + format_number(rich.ratio));
      diag.push_back("richardson_order=" + format_number(rich.order));
      diag.push_back("relative_change=" + format_number(rich.relative_change));
    }
  });
  diag.insert(diag.begin(), "n_y=" + std::to_string(run.n_y) + ";n_t=" + std::to_string(run.n_t) +
                                ";y_max=" + format_number(*run.y_max));
  table.rows.push_back({std::string("fd"), price, error, std::monostate{}, runtime,
                        join(diag, ";")});
}

void add_european_row(const RunConfig& cfg, Table& table) {
  require(cfg.option.style == OptionStyle::kEuropeanPut,
          "european_rs prices the European put only");
  EuropeanResult res{};
  const Cell runtime = timed(cfg.output.timing, [&] {
    res = price_european_put_rs(cfg.model, cfg.state.s, cfg.option.K, cfg.state.t, cfg.option.T,
                                cfg.state.regime, cfg.european->quadrature,
                                cfg.european->options);
  });
  table.rows.push_back({std::string("european_rs"), res.price, res.error_estimate,
                        std::monostate{}, runtime,
                        "route=" + std::string(to_string(res.route))});
}

Table price_table(const RunConfig& cfg) {
  Table table{kPriceColumns, {}};
  if (cfg.ham) add_ham_rows(cfg, table);
  if (cfg.fd) add_fd_row(cfg, table);
  if (cfg.mc) add_mc_row(cfg, table);
  if (cfg.european) add_european_row(cfg, table);
  return table;
}

Table convergence_table(const RunConfig& cfg) {
  require(cfg.ham.has_value(), "convergence needs a ham block");
  require_ham_contract(cfg);
  Table table{{"initial_guess", "m", "price", "delta", "term_norm_0", "term_norm_1"}, {}};
  for (const InitialGuessMode mode : {InitialGuessMode::kEuropeanRs, InitialGuessMode::kZero}) {
    HamConfig hc = cfg.ham->config;
    hc.initial_guess_mode = mode;
    const std::vector<TermGrid> terms = ham_terms(cfg.model, cfg.option.T, hc);
    double previous = 0.0;
    for (std::size_t m = 0; m < terms.size(); ++m) {
      std::vector<TermGrid> head(terms.begin(), terms.begin() + static_cast<long>(m) + 1);
      SeriesSurface surface = assemble_series(head, hc.normalization);
      surface.terminal_mode = hc.terminal_mode;
      const double price = price_floating_put_ham(cfg.state, surface).price;
      table.rows.push_back({std::string(to_string(mode)), static_cast<long long>(m), price,
                            m > 0 ? Cell(price - previous) : Cell{}, surface.term_norms[0][m],
                            surface.term_norms[1][m]});
      previous = price;
    }
  }
  return table;
}

Table symmetry_table(const RunConfig& cfg) {
  require(cfg.mc.has_value(), "symmetry-check needs an mc block");
  Table table{{"start", "lhs", "rhs", "lhs_price", "lhs_std_error", "rhs_price", "rhs_std_error",
               "z_score", "within_3se"},
              {}};
  for (const std::string& start : cfg.symmetry_starts) {
    McConfig mc = *cfg.mc;
    mc.start = start == "stationary" ? StartLaw::kStationary : StartLaw::kGiven;
    const SymmetryCheck check = check_symmetry(cfg.option, cfg.state, cfg.model, mc);
    table.rows.push_back({start, check.lhs, check.rhs, check.lhs_estimate.price,
                          check.lhs_estimate.std_error, check.rhs_estimate.price,
                          check.rhs_estimate.std_error, check.z_score,
                          std::string(std::abs(check.z_score) <= 3.0 ? "yes" : "no")});
  }
  return table;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

int run(const std::string& command, const std::string& config_path, std::ostream& out,
        std::ostream& err) {
  static const std::vector<std::string> kCommands{"price", "compare", "convergence",
                                                  "symmetry-check"};
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    err << "error: unknown command '" << command << "'\n";
    return kValidationFailure;
  }
  RunConfig cfg;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      err << "error: cannot read config " << config_path << "\n";
      return kValidationFailure;
    }
    cfg = parse_config(json::parse(in));
  } catch (const json::parse_error& e) {
    err << "error: " << config_path << " is not valid JSON: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const ConfigError& e) {
    for (const auto& m : e.messages) err << "error: " << m << "\n";
    return kValidationFailure;
  }

  try {
    Table table;
    if (command == "price" || command == "compare") {
      table = price_table(cfg);
    } else if (command == "convergence") {
      table = convergence_table(cfg);
    } else {
      table = symmetry_table(cfg);
    }
    const std::string report = render(table, cfg.output.format, command);
    if (cfg.output.path) {
      const std::filesystem::path path(*cfg.output.path);
      write_file(path, report);
      write_file(path.string() + ".effective.json", effective_config(cfg).dump(2) + "\n");
    } else {
      out << report;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return is_numerical(e.code()) ? kNumericalFailure : kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kOk;
}

}  // namespace pricer
