#ifndef FIRMLAB_ECONOMY_HPP
#define FIRMLAB_ECONOMY_HPP

// Economy level: endogenous formality choice, productivity-threshold
// search, firm taxonomy, deterministic population construction,
// aggregation, own-wage elasticity, and parameter sweeps.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "firmlab/firm.hpp"
#include "firmlab/stats.hpp"

namespace firmlab {

// Deterministic lognormal quantile grid of productivities:
// A_j = exp(mu + sigma * z_j), z_j = Phi^{-1}((j - 0.5)/k).
struct PopulationSpec {
  double mu = 0.0;
  double sigma = 1.0;
  int k = 1;

  void validate() const {
    if (!(sigma > 0.0))
      throw std::domain_error("population.sigma must be > 0");
    if (k < 1) throw std::domain_error("population.k must be >= 1");
  }
};

inline std::vector<double> build_population(const PopulationSpec& spec) {
  spec.validate();
  std::vector<double> a(static_cast<size_t>(spec.k));
  for (int j = 1; j <= spec.k; ++j) {
    const double p = (j - 0.5) / spec.k;
    a[static_cast<size_t>(j - 1)] =
        std::exp(spec.mu + spec.sigma * inverse_normal_cdf(p));
  }
  return a;
}

enum class FirmTaxonomy { FormalChooser, DeSoto, Parasite, Survival };

inline const char* to_string(FirmTaxonomy t) {
  switch (t) {
    case FirmTaxonomy::FormalChooser: return "formal_chooser";
    case FirmTaxonomy::DeSoto: return "de_soto";
    case FirmTaxonomy::Parasite: return "parasite";
    default: return "survival";
  }
}

// Picks the status with the higher maximal profit; ties go to Formal.
// A firm whose best profit is negative in both statuses exits: recorded as
// informal with zero employment and zero profit.
inline FirmDecision choose_status(double a, const ProductionTech& tech,
                                  const LaborSupply& supply,
                                  const Policy& policy) {
  FirmDecision formal = formal_optimum(a, tech, supply, policy);
  FirmDecision informal = informal_optimum(a, tech, supply, policy);
  if (formal.profit < 0.0 && informal.profit < 0.0) {
    FirmDecision exit;
    exit.status = FirmStatus::Informal;
    return exit;
  }
  return formal.profit >= informal.profit ? formal : informal;
}

struct ThresholdResult {
  enum class Kind { Interior, AllFormal, AllInformal } kind = Kind::Interior;
  double a_star = 0.0;  // meaningful only when Kind::Interior
};

// Raised when the formal-minus-informal profit gap changes sign more than
// once on the scan grid, so no single threshold exists.
struct NonMonotoneCrossing : std::runtime_error {
  std::vector<std::pair<double, double>> brackets;
  explicit NonMonotoneCrossing(std::vector<std::pair<double, double>> b)
      : std::runtime_error(describe(b)), brackets(std::move(b)) {}

 private:
  static std::string describe(
      const std::vector<std::pair<double, double>>& b) {
    std::string msg =
        "find_threshold: profit gap crosses zero more than once; brackets:";
    for (const auto& [lo, hi] : b)
      msg += " [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    return msg;
  }
};

// Bisection on the profit gap Delta(A) = Pi_F*(A) - E[Pi_I*(A)]. A 64-point
// log grid verifies single crossing first; constant-sign patterns return
// the AllFormal / AllInformal sentinels (Delta == 0 counts as formal, the
// tie-break side).
inline ThresholdResult find_threshold(const ProductionTech& tech,
                                      const LaborSupply& supply,
                                      const Policy& policy, double a_lo,
                                      double a_hi) {
  if (!(a_lo > 0.0 && a_lo < a_hi))
    throw std::domain_error("find_threshold: requires 0 < a_lo < a_hi");
  auto gap = [&](double a) {
    return formal_optimum(a, tech, supply, policy).profit -
           informal_optimum(a, tech, supply, policy).profit;
  };
  constexpr int kGrid = 64;
  std::vector<double> grid(kGrid);
  const double log_lo = std::log(a_lo), log_hi = std::log(a_hi);
  for (int i = 0; i < kGrid; ++i)
    grid[static_cast<size_t>(i)] =
        std::exp(log_lo + (log_hi - log_lo) * i / (kGrid - 1));

  std::vector<std::pair<double, double>> brackets;
  bool prev_formal = gap(grid[0]) >= 0.0;
  const bool first_formal = prev_formal;
  for (int i = 1; i < kGrid; ++i) {
    const bool formal = gap(grid[static_cast<size_t>(i)]) >= 0.0;
    if (formal != prev_formal)
      brackets.emplace_back(grid[static_cast<size_t>(i - 1)],
                            grid[static_cast<size_t>(i)]);
    prev_formal = formal;
  }
  if (brackets.empty())
    return {first_formal ? ThresholdResult::Kind::AllFormal
                         : ThresholdResult::Kind::AllInformal,
            0.0};
  if (brackets.size() > 1) throw NonMonotoneCrossing(std::move(brackets));

  auto [lo, hi] = brackets.front();
  while (hi - lo > 1e-8 * lo) {
    const double mid = 0.5 * (lo + hi);
    if ((gap(mid) >= 0.0) == first_formal)
      lo = mid;
    else
      hi = mid;
  }
  return {ThresholdResult::Kind::Interior, 0.5 * (lo + hi)};
}

// Labels informal firms by the counterfactuals behind the three classic
// views: survival firms cannot subsist formally even with the entry cost
// waived, De Soto firms would formalize if it were, parasites stay
// informal by choice.
inline FirmTaxonomy classify_firm(double a, const ProductionTech& tech,
                                  const LaborSupply& supply,
                                  const Policy& policy) {
  const FirmDecision chosen = choose_status(a, tech, supply, policy);
  if (chosen.status == FirmStatus::Formal) return FirmTaxonomy::FormalChooser;
  Policy free_entry = policy;
  free_entry.c_f = 0.0;
  const FirmDecision formal_free =
      formal_optimum(a, tech, supply, free_entry);
  if (formal_free.profit < 0.0) return FirmTaxonomy::Survival;
  if (choose_status(a, tech, supply, free_entry).status == FirmStatus::Formal)
    return FirmTaxonomy::DeSoto;
  return FirmTaxonomy::Parasite;
}

struct AggregateOutcome {
  double total_employment = 0.0;
  double formal_employment = 0.0;
  double informal_employment = 0.0;
  double formal_firm_share = 0.0;
  double informal_employment_share = 0.0;
  double output = 0.0;
  double avg_wage = 0.0;
  double gov_revenue = 0.0;  // payroll taxes plus expected fines
  // 0 when every firm is formal, +inf when every firm is informal
  double threshold_a = 0.0;
};

struct FirmRecord {
  double a = 0.0;
  FirmDecision decision;
  FirmTaxonomy taxonomy = FirmTaxonomy::FormalChooser;
};

struct EconomyResult {
  AggregateOutcome aggregate;
  std::vector<FirmRecord> firms;
};

// Solves every firm and reduces in fixed index order with equal weights
// 1/k, so results are deterministic regardless of evaluation scheduling.
inline EconomyResult simulate_economy(const ProductionTech& tech,
                                      const LaborSupply& supply,
                                      const Policy& policy,
                                      const std::vector<double>& population) {
  if (population.empty())
    throw std::domain_error("simulate_economy: empty population");
  EconomyResult res;
  res.firms.reserve(population.size());
  const double weight = 1.0 / static_cast<double>(population.size());

  double wage_bill = 0.0;
  for (double a : population) {
    FirmRecord rec;
    rec.a = a;
    rec.decision = choose_status(a, tech, supply, policy);
    rec.taxonomy = classify_firm(a, tech, supply, policy);
    res.firms.push_back(rec);

    const FirmDecision& d = rec.decision;
    const double l = weight * d.employment;
    res.aggregate.total_employment += l;
    const double a_eff =
        d.status == FirmStatus::Formal ? a : (1.0 - policy.delta) * a;
    res.aggregate.output += weight * production_output(tech, a_eff,
                                                       d.employment);
    wage_bill += weight * d.wage * d.employment;
    if (d.status == FirmStatus::Formal) {
      res.aggregate.formal_employment += l;
      res.aggregate.formal_firm_share += weight;
      res.aggregate.gov_revenue += weight * policy.tau * d.wage * d.employment;
    } else {
      res.aggregate.informal_employment += l;
      res.aggregate.gov_revenue += weight * d.detection_prob * policy.phi;
    }
  }
  if (res.aggregate.total_employment > 0.0) {
    res.aggregate.avg_wage = wage_bill / res.aggregate.total_employment;
    res.aggregate.informal_employment_share =
        res.aggregate.informal_employment / res.aggregate.total_employment;
  }

  const double a_min = population.front(), a_max = population.back();
  const ThresholdResult thr =
      find_threshold(tech, supply, policy, 0.5 * a_min, 2.0 * a_max);
  switch (thr.kind) {
    case ThresholdResult::Kind::AllFormal:
      res.aggregate.threshold_a = 0.0;
      break;
    case ThresholdResult::Kind::AllInformal:
      res.aggregate.threshold_a = std::numeric_limits<double>::infinity();
      break;
    default:
      res.aggregate.threshold_a = thr.a_star;
  }
  return res;
}

struct OweResult {
  double owe = 0.0;
  double pct_demployment = 0.0;
  double pct_dwage = 0.0;
  double affected_employment_share = 0.0;
};

struct NoAffectedWorkers : std::runtime_error {
  NoAffectedWorkers()
      : std::runtime_error(
            "compute_owe: no firm pays below the new minimum wage") {}
};

struct UndefinedOwe : std::runtime_error {
  UndefinedOwe()
      : std::runtime_error(
            "compute_owe: average wage of the affected set did not move") {}
};

// Own-wage elasticity of a minimum-wage increase: percent employment change
// of the affected firms divided by the percent change in their average
// wage. The affected set is fixed at baseline membership (baseline wage
// below the new minimum), and each firm responds within its baseline
// status, so formal firms cannot dodge the policy by deregistering inside
// the experiment.
inline OweResult compute_owe(const ProductionTech& tech,
                             const LaborSupply& supply,
                             const Policy& policy_base, double w_min_new,
                             const std::vector<double>& population) {
  if (!(w_min_new > policy_base.w_min))
    throw std::domain_error("compute_owe: requires w_min_new > baseline");
  Policy policy_new = policy_base;
  policy_new.w_min = w_min_new;

  double e0 = 0.0, e1 = 0.0, wb0 = 0.0, wb1 = 0.0, e0_total = 0.0;
  bool any_affected = false;
  for (double a : population) {
    const FirmDecision base = choose_status(a, tech, supply, policy_base);
    e0_total += base.employment;
    if (!(base.wage < w_min_new)) continue;
    any_affected = true;
    const FirmDecision next =
        base.status == FirmStatus::Formal
            ? formal_optimum(a, tech, supply, policy_new)
            : informal_optimum(a, tech, supply, policy_new);
    e0 += base.employment;
    e1 += next.employment;
    wb0 += base.wage * base.employment;
    wb1 += next.wage * next.employment;
  }
  if (!any_affected) throw NoAffectedWorkers();

  OweResult res;
  res.affected_employment_share = e0_total > 0.0 ? e0 / e0_total : 0.0;
  const double avg0 = wb0 / e0, avg1 = wb1 / e1;
  res.pct_demployment = 100.0 * (e1 - e0) / e0;
  res.pct_dwage = 100.0 * (avg1 - avg0) / avg0;
  if (res.pct_dwage == 0.0) throw UndefinedOwe();
  res.owe = res.pct_demployment / res.pct_dwage;
  return res;
}

// One simulate_economy row per grid value; all other parameters fixed.
inline std::vector<std::pair<double, AggregateOutcome>> policy_sweep(
    const ProductionTech& tech, const LaborSupply& supply,
    const Policy& policy, const std::string& parameter,
    const std::vector<double>& grid, const std::vector<double>& population) {
  if (grid.empty()) throw std::invalid_argument("policy_sweep: empty grid");
  std::vector<std::pair<double, AggregateOutcome>> rows;
  rows.reserve(grid.size());
  for (double v : grid) {
    Policy p = policy;
    if (parameter == "tau") p.tau = v;
    else if (parameter == "c_f") p.c_f = v;
    else if (parameter == "w_min") p.w_min = v;
    else if (parameter == "phi") p.phi = v;
    else if (parameter == "l_bar") p.detection.l_bar = v;
    else if (parameter == "gamma") p.detection.gamma = v;
    else if (parameter == "delta") p.delta = v;
    else
      throw std::invalid_argument("policy_sweep: unknown parameter '" +
                                  parameter + "'");
    p.validate();
    rows.emplace_back(v, simulate_economy(tech, supply, p, population)
                             .aggregate);
  }
  return rows;
}

}  // namespace firmlab

#endif
