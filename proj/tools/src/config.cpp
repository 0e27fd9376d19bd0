#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "rsasian/error.hpp"

namespace pricer {

using nlohmann::json;
using namespace rsasian;

namespace {

template <class E>
struct Names {
  std::vector<std::pair<E, std::string>> table;

  std::string name(E value) const {
    for (const auto& [v, n] : table) {
      if (v == value) return n;
    }
    return "unknown";
  }
  std::optional<E> parse(const std::string& name) const {
    for (const auto& [v, n] : table) {
      if (n == name) return v;
    }
    return std::nullopt;
  }
  std::string choices() const {
    std::string out;
    for (const auto& [v, n] : table) out += (out.empty() ? "" : ", ") + n;
    return out;
  }
};

const Names<OptionStyle> kStyles{{{OptionStyle::kFloatingPut, "floating_put"},
                                  {OptionStyle::kFloatingCall, "floating_call"},
                                  {OptionStyle::kFixedPut, "fixed_put"},
                                  {OptionStyle::kFixedCall, "fixed_call"},
                                  {OptionStyle::kEuropeanPut, "european_put"}}};
const Names<TerminalMode> kTerminal{
    {{TerminalMode::kZero, "paper_zero"}, {TerminalMode::kPayoff, "payoff"}}};
const Names<InitialGuessMode> kGuess{
    {{InitialGuessMode::kEuropeanRs, "european_rs"}, {InitialGuessMode::kZero, "zero"}}};
const Names<SeriesNormalization> kNorm{
    {{SeriesNormalization::kFactorial, "factorial"}, {SeriesNormalization::kUnit, "unit"}}};
const Names<GreensVariant> kGreens{
    {{GreensVariant::kWithTau, "with_tau"}, {GreensVariant::kWithoutTau, "without_tau"}}};
const Names<QuadratureRule> kRules{{{QuadratureRule::kGaussLegendrePanels, "gauss_legendre_panels"},
                                    {QuadratureRule::kAdaptive, "adaptive"}}};
const Names<EuropeanRoute> kRoutes{{{EuropeanRoute::kAutomatic, "automatic"},
                                    {EuropeanRoute::kClosedForm, "closed_form"},
                                    {EuropeanRoute::kTransform, "transform"}}};
const Names<CouplingFactor> kCoupling{
    {{CouplingFactor::kExact, "exact"}, {CouplingFactor::kReduced, "reduced"}}};
const Names<SignGrouping> kGrouping{
    {{SignGrouping::kFirstGroup, "first_group"}, {SignGrouping::kAllGroups, "all_groups"}}};
const Names<FdCoupling> kFdCoupling{
    {{FdCoupling::kImplicitBlock, "implicit_block"}, {FdCoupling::kStrang, "strang"}}};
const Names<FdLowerBoundary> kFdLower{{{FdLowerBoundary::kDegeneratePde, "degenerate_pde"},
                                       {FdLowerBoundary::kDirichletZero, "dirichlet_zero"}}};
const Names<StartLaw> kStart{{{StartLaw::kGiven, "given"}, {StartLaw::kStationary, "stationary"}}};

// Typed access to one JSON object; every problem is recorded with its path.
class Reader {
 public:
  Reader(const json* node, std::string path, std::vector<std::string>& errors)
      : node_(node), path_(std::move(path)), errors_(errors) {
    if (node_ && !node_->is_object()) {
      error("", "expected an object");
      node_ = nullptr;
    }
  }

  const std::string& path() const { return path_; }
  bool present() const { return node_ != nullptr; }
  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  void error(const std::string& key, const std::string& message) {
    errors_.push_back(field(key) + ": " + message);
  }

  std::string field(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  Reader child(const std::string& key) {
    return Reader(has(key) ? &node_->at(key) : nullptr, field(key), errors_);
  }

  double number(const std::string& key, std::optional<double> fallback) {
    if (!has(key) || node_->at(key).is_null()) {
      if (!fallback) error(key, "required number missing");
      return fallback.value_or(0.0);
    }
    const json& v = node_->at(key);
    if (!v.is_number()) {
      error(key, "expected a number");
      return fallback.value_or(0.0);
    }
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key) || node_->at(key).is_null()) return std::nullopt;
    return number(key, 0.0);
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = node_->at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      error(key, "expected a non-negative integer");
      return fallback;
    }
    return v.get<std::size_t>();
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = node_->at(key);
    if (!v.is_number_unsigned()) {
      error(key, "expected an unsigned integer");
      return fallback;
    }
    return v.get<std::uint64_t>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = node_->at(key);
    if (!v.is_boolean()) {
      error(key, "expected true or false");
      return fallback;
    }
    return v.get<bool>();
  }

  std::optional<std::string> text(const std::string& key) {
    if (!has(key) || node_->at(key).is_null()) return std::nullopt;
    const json& v = node_->at(key);
    if (!v.is_string()) {
      error(key, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  template <class E>
  E choice(const std::string& key, const Names<E>& names, E fallback) {
    const auto s = text(key);
    if (!s) return fallback;
    const auto v = names.parse(*s);
    if (!v) {
      error(key, "'" + *s + "' is not one of " + names.choices());
      return fallback;
    }
    return *v;
  }

  std::vector<double> numbers(const std::string& key, bool required) {
    std::vector<double> out;
    if (!has(key)) {
      if (required) error(key, "required array missing");
      return out;
    }
    const json& v = node_->at(key);
    if (!v.is_array()) {
      error(key, "expected an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        error(key + "[" + std::to_string(i) + "]", "expected a number");
        continue;
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  void reject_unknown(const std::set<std::string>& known) {
    if (!node_) return;
    for (const auto& [key, value] : node_->items()) {
      if (!known.count(key)) error(key, "unknown field");
    }
  }

 private:
  const json* node_;
  std::string path_;
  std::vector<std::string>& errors_;
};

void guard(Reader& r, const std::string& key, const std::function<void()>& check) {
  try {
    check();
  } catch (const Error& e) {
    r.error(key, e.what());
  }
}

QuadratureSpec read_quadrature(Reader r) {
  QuadratureSpec q;
  r.reject_unknown({"rho_max", "n_rho", "rule", "abs_tol", "rel_tol"});
  q.rho_max = r.number("rho_max", q.rho_max);
  q.n_rho = r.count("n_rho", q.n_rho);
  q.rule = r.choice("rule", kRules, q.rule);
  q.abs_tol = r.number("abs_tol", q.abs_tol);
  q.rel_tol = r.number("rel_tol", q.rel_tol);
  guard(r, "", [&] { validate_quadrature(q); });
  return q;
}

HamBlock read_ham(Reader r) {
  HamBlock b;
  HamConfig& c = b.config;
  r.reject_unknown({"m_trunc", "n_z", "n_u", "z_min", "z_max", "xi_refine", "terminal_mode",
                    "initial_guess_mode", "greens_variant", "normalization", "quadrature"});
  c.n_z = r.count("n_z", c.n_z);
  c.n_u = r.count("n_u", c.n_u);
  c.z_min = r.optional_number("z_min");
  c.z_max = r.optional_number("z_max");
  c.xi_refine = r.count("xi_refine", c.xi_refine);
  c.terminal_mode = r.choice("terminal_mode", kTerminal, c.terminal_mode);
  c.initial_guess_mode = r.choice("initial_guess_mode", kGuess, c.initial_guess_mode);
  c.greens = r.choice("greens_variant", kGreens, c.greens);
  c.normalization = r.choice("normalization", kNorm, c.normalization);
  if (r.has("quadrature")) c.quadrature = read_quadrature(r.child("quadrature"));
  return b;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  std::vector<std::string> errors;
  Reader root(&doc, "", errors);
  RunConfig cfg;
  root.reject_unknown({"schema_version", "model", "option", "state", "method", "output",
                       "symmetry"});
  if (!root.has("schema_version")) {
    root.error("schema_version", "required field missing");
  } else if (!doc.at("schema_version").is_number_integer() ||
             doc.at("schema_version").get<long long>() != kSchemaVersion) {
    root.error("schema_version", "unsupported version (expected " +
                                     std::to_string(kSchemaVersion) + ")");
  }

  bool model_ok = false;
  // model
  {
    const std::size_t before = errors.size();
    Reader m = root.child("model");
    if (!m.present()) m.error("", "required object missing");
    m.reject_unknown({"r", "sigma", "q", "gen"});
    cfg.model.r = m.numbers("r", true);
    cfg.model.sigma = m.numbers("sigma", true);
    cfg.model.q = m.numbers("q", false);
    if (m.has("gen")) {
      const json& g = doc.at("model").at("gen");
      if (!g.is_array()) {
        m.error("gen", "expected an array of rows");
      } else {
        for (std::size_t i = 0; i < g.size(); ++i) {
          std::vector<double> row;
          const std::string key = "gen[" + std::to_string(i) + "]";
          if (!g[i].is_array()) {
            m.error(key, "expected an array of numbers");
          } else {
            for (const auto& v : g[i]) {
              if (v.is_number()) {
                row.push_back(v.get<double>());
              } else {
                m.error(key, "expected numbers");
              }
            }
          }
          cfg.model.gen.push_back(row);
        }
      }
    } else if (m.present()) {
      m.error("gen", "required array missing");
    }
    if (m.present() && errors.size() == before) {
      ValidationOptions opts;
      opts.allow_zero_rates = true;  // counterpart models carry zero rates
      guard(m, "", [&] { cfg.model = validate_model(cfg.model, opts); });
      model_ok = errors.size() == before;
    }
  }

  bool option_ok = false;
  // option
  {
    const std::size_t before = errors.size();
    Reader o = root.child("option");
    if (!o.present()) o.error("", "required object missing");
    o.reject_unknown({"style", "T", "K", "multiplier"});
    cfg.option.style = o.choice("style", kStyles, cfg.option.style);
    cfg.option.T = o.number("T", std::nullopt);
    cfg.option.K = o.number("K", 0.0);
    cfg.option.strike_multiplier = o.number("multiplier", 1.0);
    if (o.present() && errors.size() == before) {
      guard(o, "", [&] { validate_option(cfg.option); });
      option_ok = errors.size() == before;
    }
  }

  bool state_ok = false;
  // state
  {
    const std::size_t before = errors.size();
    Reader s = root.child("state");
    if (!s.present()) s.error("", "required object missing");
    s.reject_unknown({"t", "s", "a", "regime"});
    cfg.state.t = s.number("t", 0.0);
    cfg.state.s = s.number("s", std::nullopt);
    cfg.state.a = s.number("a", 0.0);
    cfg.state.regime = s.count("regime", 0);
    if (s.present() && model_ok && option_ok && errors.size() == before) {
      guard(s, "", [&] { validate_state(cfg.state, cfg.option, cfg.model); });
      state_ok = errors.size() == before;
    }
  }

  // method
  {
    Reader m = root.child("method");
    if (!m.present()) {
      m.error("", "required object missing");
    } else {
      const json& node = doc.at("method");
      if (node.size() != 1) {
        m.error("", "exactly one method block required (ham, mc, fd, european_rs, compare)");
      } else {
        cfg.method = node.begin().key();
        auto read_method = [&](Reader r, const std::string& kind, bool in_compare) {
          if (kind == "ham") {
            HamBlock b = read_ham(r);
            // m_trunc is a count, or in compare a list of counts.
            const std::string key = "m_trunc";
            if (r.has(key)) {
              const json& v = in_compare ? node.at("compare").at("ham").at(key)
                                         : node.at("ham").at(key);
              if (v.is_number_integer() && v.get<long long>() >= 0) {
                b.config.m_trunc = v.get<int>();
                b.m_list = {b.config.m_trunc};
              } else if (in_compare && v.is_array() && !v.empty()) {
                for (const auto& e : v) {
                  if (!e.is_number_integer() || e.get<long long>() < 0) {
                    r.error(key, "expected non-negative integers");
                    break;
                  }
                  b.m_list.push_back(e.get<int>());
                }
                if (!b.m_list.empty()) {
                  b.config.m_trunc = *std::max_element(b.m_list.begin(), b.m_list.end());
                }
              } else {
                r.error(key, in_compare ? "expected a non-negative integer or a list of them"
                                        : "expected a non-negative integer");
              }
            } else {
              b.m_list = in_compare ? std::vector<int>{1, 2, 3, 4}
                                    : std::vector<int>{b.config.m_trunc};
              b.config.m_trunc = b.m_list.back();
            }
            guard(r, "", [&] { validate_ham_config(b.config); });
            cfg.ham = b;
          } else if (kind == "mc") {
            McConfig c;
            r.reject_unknown({"n_paths", "n_steps", "seed", "antithetic", "start"});
            c.n_paths = r.count("n_paths", c.n_paths);
            c.n_steps = r.count("n_steps", c.n_steps);
            c.seed = r.seed("seed", c.seed);
            c.antithetic = r.flag("antithetic", c.antithetic);
            c.start = r.choice("start", kStart, c.start);
            guard(r, "", [&] { validate_mc_config(c); });
            cfg.mc = c;
          } else if (kind == "fd") {
            FdBlock b;
            r.reject_unknown({"y_max", "n_y", "n_t", "coupling", "lower_boundary",
                              "rannacher_half_steps", "retain_every", "richardson"});
            b.config.y_max = r.optional_number("y_max");
            b.config.n_y = r.count("n_y", b.config.n_y);
            b.config.n_t = r.count("n_t", b.config.n_t);
            b.config.coupling = r.choice("coupling", kFdCoupling, b.config.coupling);
            b.config.lower = r.choice("lower_boundary", kFdLower, b.config.lower);
            b.config.rannacher_half_steps =
                r.count("rannacher_half_steps", b.config.rannacher_half_steps);
            b.config.retain_every = r.count("retain_every", b.config.retain_every);
            b.richardson = r.flag("richardson", b.richardson);
            if (option_ok && state_ok) {
              guard(r, "", [&] {
                if (!b.config.y_max) {
                  b.config.y_max = default_y_max(cfg.option.T, cfg.state.y());
                }
                validate_fd_config(b.config, cfg.option.T);
              });
            }
            cfg.fd = b;
          } else if (kind == "european_rs") {
            EuropeanBlock b;
            r.reject_unknown({"route", "coupling_factor", "grouping", "quadrature"});
            b.options.route = r.choice("route", kRoutes, b.options.route);
            b.options.coupling = r.choice("coupling_factor", kCoupling, b.options.coupling);
            b.options.grouping = r.choice("grouping", kGrouping, b.options.grouping);
            if (r.has("quadrature")) b.quadrature = read_quadrature(r.child("quadrature"));
            cfg.european = b;
          } else {
            r.error("", "unknown method '" + kind + "'");
          }
        };
        if (cfg.method == "compare") {
          Reader c = m.child("compare");
          c.reject_unknown({"ham", "mc", "fd", "european_rs"});
          bool any = false;
          for (const char* kind : {"ham", "mc", "fd", "european_rs"}) {
            if (c.has(kind)) {
              any = true;
              read_method(c.child(kind), kind, true);
            }
          }
          if (!any) c.error("", "compare needs at least one of ham, mc, fd, european_rs");
        } else {
          read_method(m.child(cfg.method), cfg.method, false);
        }
      }
    }
  }

  // HAM grid bounds are materialised once T is known.
  if (cfg.ham && option_ok) {
    Reader h(nullptr, cfg.method == "compare" ? "method.compare.ham" : "method.ham", errors);
    guard(h, "", [&] {
      if (!cfg.ham->config.z_min) cfg.ham->config.z_min = -std::log(20.0 * cfg.option.T);
      if (!cfg.ham->config.z_max) cfg.ham->config.z_max = -std::log(1e-4);
      make_ham_grid(cfg.ham->config, cfg.option.T);
    });
  }

  if (root.has("symmetry")) {
    Reader s = root.child("symmetry");
    s.reject_unknown({"starts"});
    if (s.has("starts")) {
      const json& v = doc.at("symmetry").at("starts");
      cfg.symmetry_starts.clear();
      if (!v.is_array()) {
        s.error("starts", "expected an array");
      } else {
        for (const auto& e : v) {
          if (!e.is_string() || !kStart.parse(e.get<std::string>())) {
            s.error("starts", "entries must be one of " + kStart.choices());
          } else {
            cfg.symmetry_starts.push_back(e.get<std::string>());
          }
        }
      }
    }
  }

  {
    Reader o = root.child("output");
    o.reject_unknown({"format", "path", "timing"});
    cfg.output.format = o.text("format").value_or("csv");
    if (cfg.output.format != "csv" && cfg.output.format != "json") {
      o.error("format", "'" + cfg.output.format + "' is not one of csv, json");
    }
    cfg.output.path = o.text("path");
    cfg.output.timing = o.flag("timing", false);
  }

  if (!errors.empty()) throw ConfigError{errors};
  return cfg;
}

namespace {

json quadrature_json(const QuadratureSpec& q) {
  return {{"rho_max", q.rho_max},
          {"n_rho", q.n_rho},
          {"rule", kRules.name(q.rule)},
          {"abs_tol", q.abs_tol},
          {"rel_tol", q.rel_tol}};
}

json ham_json(const HamBlock& b, bool in_compare) {
  const HamConfig& c = b.config;
  json j = {{"n_z", c.n_z},
            {"n_u", c.n_u},
            {"z_min", c.z_min ? json(*c.z_min) : json(nullptr)},
            {"z_max", c.z_max ? json(*c.z_max) : json(nullptr)},
            {"xi_refine", c.xi_refine},
            {"terminal_mode", kTerminal.name(c.terminal_mode)},
            {"initial_guess_mode", kGuess.name(c.initial_guess_mode)},
            {"greens_variant", kGreens.name(c.greens)},
            {"normalization", kNorm.name(c.normalization)},
            {"quadrature", quadrature_json(c.quadrature)}};
  if (in_compare) {
    j["m_trunc"] = b.m_list;
  } else {
    j["m_trunc"] = c.m_trunc;
  }
  return j;
}

json mc_json(const McConfig& c) {
  return {{"n_paths", c.n_paths},
          {"n_steps", c.n_steps},
          {"seed", c.seed},
          {"antithetic", c.antithetic},
          {"start", kStart.name(c.start)}};
}

json fd_json(const FdBlock& b) {
  const FdConfig& c = b.config;
  return {{"y_max", c.y_max ? json(*c.y_max) : json(nullptr)},
          {"n_y", c.n_y},
          {"n_t", c.n_t},
          {"coupling", kFdCoupling.name(c.coupling)},
          {"lower_boundary", kFdLower.name(c.lower)},
          {"rannacher_half_steps", c.rannacher_half_steps},
          {"retain_every", c.retain_every},
          {"richardson", b.richardson}};
}

json european_json(const EuropeanBlock& b) {
  return {{"route", kRoutes.name(b.options.route)},
          {"coupling_factor", kCoupling.name(b.options.coupling)},
          {"grouping", kGrouping.name(b.options.grouping)},
          {"quadrature", quadrature_json(b.quadrature)}};
}

}  // namespace

json effective_config(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = {{"r", cfg.model.r},
                {"sigma", cfg.model.sigma},
                {"q", cfg.model.q},
                {"gen", cfg.model.gen}};
  j["option"] = {{"style", kStyles.name(cfg.option.style)},
                 {"T", cfg.option.T},
                 {"K", cfg.option.K},
                 {"multiplier", cfg.option.strike_multiplier}};
  j["state"] = {{"t", cfg.state.t},
                {"s", cfg.state.s},
                {"a", cfg.state.a},
                {"regime", cfg.state.regime}};
  const bool compare = cfg.method == "compare";
  json methods = json::object();
  if (cfg.ham) methods["ham"] = ham_json(*cfg.ham, compare);
  if (cfg.mc) methods["mc"] = mc_json(*cfg.mc);
  if (cfg.fd) methods["fd"] = fd_json(*cfg.fd);
  if (cfg.european) methods["european_rs"] = european_json(*cfg.european);
  j["method"] = compare ? json{{"compare", methods}} : methods;
  j["symmetry"] = {{"starts", cfg.symmetry_starts}};
  j["output"] = {{"format", cfg.output.format},
                 {"path", cfg.output.path ? json(*cfg.output.path) : json(nullptr)},
                 {"timing", cfg.output.timing}};
  return j;
}

}  // namespace pricer
