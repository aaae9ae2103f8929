#ifndef FIRMLAB_CONFIG_HPP
#define FIRMLAB_CONFIG_HPP

// Configuration file loading for the CLI. The file is JSON with nested key
// groups; parsing is strict (unknown keys rejected) so typos in
// calibration studies fail loudly instead of silently using a default.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "firmlab/core.hpp"
#include "firmlab/economy.hpp"
#include "firmlab/metareg.hpp"

namespace firmlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepConfig {
  std::string parameter;
  std::vector<double> grid;
};

struct OweConfig {
  double w_min_new = 0.0;
};

// Either a path to a study CSV or parameters for a simulated literature.
struct MetaregConfig {
  std::optional<std::string> input;
  double true_effect = 0.0;
  int n = 2000;
  double se_lo = 0.05;
  double se_hi = 0.5;
  std::string rule = "negative_sig";  // none | two_sided_sig | negative_sig
  double p_keep = 0.1;
};

struct RunConfig {
  ProductionTech tech{};
  LaborSupply supply{};
  Policy policy{};
  PopulationSpec population{};
  std::optional<SweepConfig> sweep;
  std::optional<OweConfig> owe;
  std::optional<MetaregConfig> metareg;
  std::string output_dir = "out";
  uint64_t seed = 0;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                const std::set<std::string>& allowed,
                                const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("config: unknown key '" +
                        (path.empty() ? key : path + "." + key) + "'");
  }
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& path) {
  if (!obj.contains(key))
    throw ConfigError("config: missing required key '" + path + "." + key +
                      "'");
  if (!obj[key].is_number())
    throw ConfigError("config: '" + path + "." + key + "' must be a number");
  return obj[key].get<double>();
}

inline double number_or(const nlohmann::json& obj, const std::string& key,
                        const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw ConfigError("config: '" + path + "." + key + "' must be a number");
  return obj[key].get<double>();
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::number_or;
  using detail::reject_unknown_keys;
  using detail::require_number;

  RunConfig cfg;
  reject_unknown_keys(j,
                      {"tech", "supply", "policy", "population", "sweep",
                       "owe", "metareg", "output_dir", "seed"},
                      "");

  if (!j.contains("tech")) throw ConfigError("config: missing key 'tech'");
  reject_unknown_keys(j["tech"], {"alpha"}, "tech");
  cfg.tech.alpha = require_number(j["tech"], "alpha", "tech");

  if (!j.contains("supply")) throw ConfigError("config: missing key 'supply'");
  reject_unknown_keys(j["supply"], {"b", "eta"}, "supply");
  cfg.supply.b = require_number(j["supply"], "b", "supply");
  cfg.supply.eta = require_number(j["supply"], "eta", "supply");

  if (j.contains("policy")) {
    const auto& p = j["policy"];
    reject_unknown_keys(
        p, {"tau", "c_f", "w_min", "phi", "delta", "detection"}, "policy");
    cfg.policy.tau = number_or(p, "tau", "policy", 0.0);
    cfg.policy.c_f = number_or(p, "c_f", "policy", 0.0);
    cfg.policy.w_min = number_or(p, "w_min", "policy", 0.0);
    cfg.policy.phi = number_or(p, "phi", "policy", 0.0);
    cfg.policy.delta = number_or(p, "delta", "policy", 0.0);
    if (p.contains("detection")) {
      reject_unknown_keys(p["detection"], {"l_bar", "gamma"},
                          "policy.detection");
      cfg.policy.detection.l_bar =
          require_number(p["detection"], "l_bar", "policy.detection");
      cfg.policy.detection.gamma =
          require_number(p["detection"], "gamma", "policy.detection");
    }
  }

  if (!j.contains("population"))
    throw ConfigError("config: missing key 'population'");
  reject_unknown_keys(j["population"], {"mu", "sigma", "k"}, "population");
  cfg.population.mu = require_number(j["population"], "mu", "population");
  cfg.population.sigma =
      require_number(j["population"], "sigma", "population");
  cfg.population.k = static_cast<int>(
      require_number(j["population"], "k", "population"));

  if (j.contains("sweep")) {
    reject_unknown_keys(j["sweep"], {"parameter", "grid"}, "sweep");
    SweepConfig s;
    if (!j["sweep"].contains("parameter") || !j["sweep"]["parameter"].is_string())
      throw ConfigError("config: 'sweep.parameter' must be a string");
    s.parameter = j["sweep"]["parameter"].get<std::string>();
    if (!j["sweep"].contains("grid") || !j["sweep"]["grid"].is_array())
      throw ConfigError("config: 'sweep.grid' must be an array");
    for (const auto& v : j["sweep"]["grid"]) {
      if (!v.is_number())
        throw ConfigError("config: 'sweep.grid' entries must be numbers");
      s.grid.push_back(v.get<double>());
    }
    cfg.sweep = std::move(s);
  }

  if (j.contains("owe")) {
    reject_unknown_keys(j["owe"], {"w_min_new"}, "owe");
    cfg.owe = OweConfig{require_number(j["owe"], "w_min_new", "owe")};
  }

  if (j.contains("metareg")) {
    const auto& m = j["metareg"];
    reject_unknown_keys(
        m, {"input", "true_effect", "n", "se_lo", "se_hi", "rule", "p_keep"},
        "metareg");
    MetaregConfig mc;
    if (m.contains("input")) {
      if (!m["input"].is_string())
        throw ConfigError("config: 'metareg.input' must be a string");
      mc.input = m["input"].get<std::string>();
    }
    mc.true_effect = number_or(m, "true_effect", "metareg", mc.true_effect);
    mc.n = static_cast<int>(number_or(m, "n", "metareg", mc.n));
    mc.se_lo = number_or(m, "se_lo", "metareg", mc.se_lo);
    mc.se_hi = number_or(m, "se_hi", "metareg", mc.se_hi);
    if (m.contains("rule")) {
      if (!m["rule"].is_string())
        throw ConfigError("config: 'metareg.rule' must be a string");
      mc.rule = m["rule"].get<std::string>();
      if (mc.rule != "none" && mc.rule != "two_sided_sig" &&
          mc.rule != "negative_sig")
        throw ConfigError("config: 'metareg.rule' must be one of none, "
                          "two_sided_sig, negative_sig");
    }
    mc.p_keep = number_or(m, "p_keep", "metareg", mc.p_keep);
    cfg.metareg = std::move(mc);
  }

  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string())
      throw ConfigError("config: 'output_dir' must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer())
      throw ConfigError("config: 'seed' must be an integer");
    cfg.seed = j["seed"].get<uint64_t>();
  }

  // validate() messages carry the offending key path
  cfg.tech.validate();
  cfg.supply.validate();
  cfg.policy.validate();
  cfg.population.validate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: parse error in '" + path + "': " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: constraint violation: ") +
                      e.what());
  }
}

inline CensorRule censor_rule_from(const MetaregConfig& mc) {
  if (mc.rule == "none") return CensorRule::none();
  if (mc.rule == "two_sided_sig") return CensorRule::two_sided_sig(mc.p_keep);
  return CensorRule::negative_sig(mc.p_keep);
}

}  // namespace firmlab

#endif
