// firmlab command-line front end: parses a JSON config, dispatches
// subcommands, and writes CSV outputs plus a run manifest.
//
// Exit codes: 0 success, 2 model-domain error, 64 usage error, 74 I/O error.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "firmlab/config.hpp"
#include "firmlab/csv.hpp"
#include "firmlab/economy.hpp"
#include "firmlab/firm.hpp"
#include "firmlab/metareg.hpp"

namespace {

constexpr const char* kVersion = "firmlab 0.1.0";

constexpr int kExitModelError = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

using firmlab::csv::Table;

nlohmann::json echo_config(const firmlab::RunConfig& cfg) {
  nlohmann::json j;
  j["tech"] = {{"alpha", cfg.tech.alpha}};
  j["supply"] = {{"b", cfg.supply.b}, {"eta", cfg.supply.eta}};
  j["policy"] = {{"tau", cfg.policy.tau},
                 {"c_f", cfg.policy.c_f},
                 {"w_min", cfg.policy.w_min},
                 {"phi", cfg.policy.phi},
                 {"delta", cfg.policy.delta},
                 {"detection",
                  {{"l_bar", cfg.policy.detection.l_bar},
                   {"gamma", cfg.policy.detection.gamma}}}};
  j["population"] = {{"mu", cfg.population.mu},
                     {"sigma", cfg.population.sigma},
                     {"k", cfg.population.k}};
  if (cfg.sweep)
    j["sweep"] = {{"parameter", cfg.sweep->parameter},
                  {"grid", cfg.sweep->grid}};
  if (cfg.owe) j["owe"] = {{"w_min_new", cfg.owe->w_min_new}};
  if (cfg.metareg) {
    nlohmann::json m = {{"true_effect", cfg.metareg->true_effect},
                        {"n", cfg.metareg->n},
                        {"se_lo", cfg.metareg->se_lo},
                        {"se_hi", cfg.metareg->se_hi},
                        {"rule", cfg.metareg->rule},
                        {"p_keep", cfg.metareg->p_keep}};
    if (cfg.metareg->input) m["input"] = *cfg.metareg->input;
    j["metareg"] = m;
  }
  j["output_dir"] = cfg.output_dir;
  j["seed"] = cfg.seed;
  return j;
}

void write_manifest(const std::filesystem::path& out_dir,
                    const std::string& subcommand,
                    const firmlab::RunConfig& cfg) {
  std::ofstream out(out_dir / "manifest.txt", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest.txt");
  out << "tool: " << kVersion << "\n"
      << "subcommand: " << subcommand << "\n"
      << "seed: " << cfg.seed << "\n"
      << "config:\n"
      << echo_config(cfg).dump(2) << "\n";
}

Table aggregate_table(const std::vector<firmlab::AggregateOutcome>& rows,
                      const std::vector<std::string>& prefix_header = {},
                      const std::vector<double>& prefix_values = {}) {
  Table t;
  t.header = prefix_header;
  for (const char* name :
       {"total_employment", "formal_employment", "informal_employment",
        "formal_firm_share", "informal_employment_share", "output",
        "avg_wage", "gov_revenue", "threshold_a"})
    t.header.emplace_back(name);
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& a = rows[i];
    std::vector<firmlab::csv::Cell> row;
    if (!prefix_header.empty()) row.emplace_back(prefix_values[i]);
    for (double v : {a.total_employment, a.formal_employment,
                     a.informal_employment, a.formal_firm_share,
                     a.informal_employment_share, a.output, a.avg_wage,
                     a.gov_revenue, a.threshold_a})
      row.emplace_back(v);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table firms_table(const std::vector<firmlab::FirmRecord>& firms) {
  Table t;
  t.header = {"a", "status", "employment", "wage", "profit", "regime",
              "taxonomy"};
  for (const auto& f : firms) {
    const auto& d = f.decision;
    t.rows.push_back({f.a, std::string(to_string(d.status)), d.employment,
                      d.wage, d.profit,
                      d.status == firmlab::FirmStatus::Formal
                          ? std::string(to_string(d.regime))
                          : std::string(),
                      std::string(to_string(f.taxonomy))});
  }
  return t;
}

Table metareg_table(const firmlab::FatPetResult& r, double naive_mean) {
  Table t;
  t.header = {"pet", "fat", "se_pet", "se_fat", "n", "naive_mean"};
  t.rows.push_back({r.pet, r.fat, r.se_pet, r.se_fat,
                    static_cast<long long>(r.n), naive_mean});
  return t;
}

Table funnel_table(const std::vector<firmlab::StudyEstimate>& studies) {
  Table t;
  t.header = {"effect", "precision"};
  for (const auto& [effect, precision] : firmlab::funnel_points(studies))
    t.rows.push_back({effect, precision});
  return t;
}

Table studies_table(const std::vector<firmlab::StudyEstimate>& studies) {
  Table t;
  t.header = {"effect", "se"};
  for (const auto& s : studies) t.rows.push_back({s.effect, s.se});
  return t;
}

std::vector<firmlab::StudyEstimate> load_studies(const std::string& path) {
  const Table t = firmlab::csv::read_csv(path);
  if (t.header != std::vector<std::string>{"effect", "se"})
    throw std::runtime_error("study CSV '" + path +
                             "' must have header 'effect,se'");
  std::vector<firmlab::StudyEstimate> studies;
  studies.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    if (row.size() != 2)
      throw std::runtime_error("study CSV '" + path + "': ragged row");
    studies.push_back(
        {firmlab::csv::parse_double(std::get<std::string>(row[0])),
         firmlab::csv::parse_double(std::get<std::string>(row[1]))});
  }
  return studies;
}

// Obtain studies from the metareg block: file input wins, otherwise a
// seeded simulation (also echoed to studies.csv for reproducibility).
std::vector<firmlab::StudyEstimate> obtain_studies(
    const firmlab::RunConfig& cfg, const std::filesystem::path& out_dir) {
  firmlab::MetaregConfig mc =
      cfg.metareg ? *cfg.metareg : firmlab::MetaregConfig{};
  if (mc.input) return load_studies(*mc.input);
  auto studies = firmlab::simulate_studies(mc.true_effect, mc.n, mc.se_lo,
                                           mc.se_hi,
                                           firmlab::censor_rule_from(mc),
                                           cfg.seed);
  firmlab::csv::write_csv(studies_table(studies),
                          (out_dir / "studies.csv").string());
  return studies;
}

int dispatch(const std::string& subcommand, const firmlab::RunConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  write_manifest(out_dir, subcommand, cfg);

  const auto population = firmlab::build_population(cfg.population);

  if (subcommand == "simulate") {
    const auto res = firmlab::simulate_economy(cfg.tech, cfg.supply,
                                               cfg.policy, population);
    firmlab::csv::write_csv(aggregate_table({res.aggregate}),
                            (out_dir / "aggregate.csv").string());
    firmlab::csv::write_csv(firms_table(res.firms),
                            (out_dir / "firms.csv").string());
  } else if (subcommand == "sweep") {
    if (!cfg.sweep)
      throw firmlab::ConfigError("config: 'sweep' block required");
    const auto rows =
        firmlab::policy_sweep(cfg.tech, cfg.supply, cfg.policy,
                              cfg.sweep->parameter, cfg.sweep->grid,
                              population);
    std::vector<firmlab::AggregateOutcome> outcomes;
    std::vector<double> values;
    for (const auto& [v, agg] : rows) {
      values.push_back(v);
      outcomes.push_back(agg);
    }
    firmlab::csv::write_csv(
        aggregate_table(outcomes, {cfg.sweep->parameter}, values),
        (out_dir / "sweep.csv").string());
  } else if (subcommand == "owe") {
    if (!cfg.owe) throw firmlab::ConfigError("config: 'owe' block required");
    const auto r = firmlab::compute_owe(cfg.tech, cfg.supply, cfg.policy,
                                        cfg.owe->w_min_new, population);
    Table t;
    t.header = {"owe", "pct_demployment", "pct_dwage",
                "affected_employment_share"};
    t.rows.push_back({r.owe, r.pct_demployment, r.pct_dwage,
                      r.affected_employment_share});
    firmlab::csv::write_csv(t, (out_dir / "owe.csv").string());
  } else if (subcommand == "threshold") {
    const auto thr = firmlab::find_threshold(
        cfg.tech, cfg.supply, cfg.policy, 0.5 * population.front(),
        2.0 * population.back());
    Table t;
    t.header = {"kind", "a_star"};
    using Kind = firmlab::ThresholdResult::Kind;
    const std::string kind = thr.kind == Kind::Interior ? "interior"
                             : thr.kind == Kind::AllFormal ? "all_formal"
                                                           : "all_informal";
    t.rows.push_back({kind, thr.a_star});
    firmlab::csv::write_csv(t, (out_dir / "threshold.csv").string());
  } else if (subcommand == "classify") {
    const auto res = firmlab::simulate_economy(cfg.tech, cfg.supply,
                                               cfg.policy, population);
    firmlab::csv::write_csv(firms_table(res.firms),
                            (out_dir / "firms.csv").string());
  } else if (subcommand == "metareg" || subcommand == "biasdemo") {
    const auto studies = obtain_studies(cfg, out_dir);
    const auto fp = firmlab::fat_pet(studies);
    firmlab::csv::write_csv(
        metareg_table(fp, firmlab::naive_pooled_mean(studies)),
        (out_dir / "metareg.csv").string());
    firmlab::csv::write_csv(funnel_table(studies),
                            (out_dir / "funnel.csv").string());
  } else {
    std::cerr << "unknown subcommand '" << subcommand << "'\n";
    return kExitUsage;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monopsony / minimum-wage / informality model laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  const std::vector<std::string> names = {"simulate", "sweep",     "owe",
                                          "threshold", "classify", "metareg",
                                          "biasdemo"};
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "path to JSON config")
        ->required();
    sub->add_option("--out", out_override, "output directory override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    firmlab::RunConfig cfg = firmlab::load_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    return dispatch(app.get_subcommands().front()->get_name(), cfg);
  } catch (const firmlab::NonMonotoneCrossing& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitModelError;
  } catch (const firmlab::ConfigError& e) {
    std::cerr << e.what() << "\n";
    const std::string msg = e.what();
    return msg.find("cannot open") != std::string::npos ? kExitIo
                                                        : kExitModelError;
  } catch (const std::domain_error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitModelError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    return msg.find("cannot open") != std::string::npos ||
                   msg.find("write failed") != std::string::npos
               ? kExitIo
               : kExitModelError;
  }
}
