#ifndef FIRMLAB_FIRM_HPP
#define FIRMLAB_FIRM_HPP

// Single-firm profit maximization: the closed-form monopsony optimum, the
// three-regime solution around the minimum-wage kink in marginal labor
// cost, and the numeric informal optimum with expected detection penalties.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "firmlab/core.hpp"
#include "firmlab/optimize.hpp"

namespace firmlab {

enum class FirmStatus { Formal, Informal };

// Position of the MRPL curve relative to the discontinuous marginal-cost
// curve created by a binding minimum wage.
enum class MinWageRegime { NotBinding, SupplyConstrained, DemandConstrained };

inline const char* to_string(FirmStatus s) {
  return s == FirmStatus::Formal ? "formal" : "informal";
}

inline const char* to_string(MinWageRegime r) {
  switch (r) {
    case MinWageRegime::NotBinding: return "not_binding";
    case MinWageRegime::SupplyConstrained: return "supply_constrained";
    default: return "demand_constrained";
  }
}

struct FirmDecision {
  FirmStatus status = FirmStatus::Formal;
  double employment = 0.0;
  double wage = 0.0;
  double profit = 0.0;  // expected profit when informal
  MinWageRegime regime = MinWageRegime::NotBinding;  // formal only
  double detection_prob = 0.0;                       // informal only
};

// L* solving a f'(L) = (1+tau) w(L) (1+1/eta) under the chosen functional
// forms: L* = [a alpha / ((1+tau) b (1+1/eta))]^(1/(1/eta + 1 - alpha)).
inline double unconstrained_employment(double a, const ProductionTech& tech,
                                       const LaborSupply& supply, double tau) {
  const double base =
      a * tech.alpha / ((1.0 + tau) * supply.b * (1.0 + 1.0 / supply.eta));
  return std::pow(base, 1.0 / (1.0 / supply.eta + 1.0 - tech.alpha));
}

// Formal objective without the fixed cost, evaluated at arbitrary L. The
// wage actually paid is max(w(L), w_min): below L_min the firm pays the
// minimum wage, above it the supply wage exceeds w_min anyway.
inline double formal_objective(double a, const ProductionTech& tech,
                               const LaborSupply& supply, double tau,
                               double w_min, double l) {
  if (l == 0.0) return 0.0;
  const double wage = std::max(supply_wage(supply, l), w_min);
  return production_output(tech, a, l) - (1.0 + tau) * wage * l;
}

inline double informal_objective(double a, const ProductionTech& tech,
                                 const LaborSupply& supply,
                                 const Policy& policy, double l) {
  if (l == 0.0) return 0.0;
  return (1.0 - policy.delta) * production_output(tech, a, l) -
         supply_wage(supply, l) * l -
         detection_prob(policy.detection, l) * policy.phi;
}

// Exact objective value of the given status at employment l, including the
// fixed cost (formal) and the expected fine (informal).
inline double profit_at(double a, const ProductionTech& tech,
                        const LaborSupply& supply, const Policy& policy,
                        FirmStatus status, double l) {
  if (l < 0.0) throw std::domain_error("profit_at: negative employment");
  if (status == FirmStatus::Formal)
    return formal_objective(a, tech, supply, policy.tau, policy.w_min, l) -
           policy.c_f;
  return informal_objective(a, tech, supply, policy, l);
}

// Interior monopsony optimum with no minimum wage. Profit excludes the
// fixed formality cost; the caller subtracts it.
inline FirmDecision formal_optimum_unconstrained(double a,
                                                 const ProductionTech& tech,
                                                 const LaborSupply& supply,
                                                 double tau) {
  if (!(a > 0.0))
    throw std::domain_error("formal_optimum_unconstrained: requires a > 0");
  FirmDecision d;
  d.status = FirmStatus::Formal;
  d.regime = MinWageRegime::NotBinding;
  d.employment = unconstrained_employment(a, tech, supply, tau);
  d.wage = supply_wage(supply, d.employment);
  d.profit = production_output(tech, a, d.employment) -
             (1.0 + tau) * d.wage * d.employment;
  return d;
}

// Three-regime formal solution. A minimum wage below the unconstrained
// optimal wage cannot bind. Otherwise the marginal cost of labor is flat at
// (1+tau) w_min up to L_min and jumps upward there; the optimum sits either
// at the kink (supply constrained) or on the flat segment where
// a f'(L) = (1+tau) w_min (demand constrained).
inline FirmDecision formal_optimum(double a, const ProductionTech& tech,
                                   const LaborSupply& supply,
                                   const Policy& policy) {
  if (!(a > 0.0)) throw std::domain_error("formal_optimum: requires a > 0");
  FirmDecision d = formal_optimum_unconstrained(a, tech, supply, policy.tau);
  if (policy.w_min > d.wage) {
    const double l_min = supply_employment(supply, policy.w_min);
    const double mrpl_at_kink =
        l_min > 0.0 ? marginal_product(tech, a, l_min)
                    : std::numeric_limits<double>::infinity();
    if (mrpl_at_kink >= (1.0 + policy.tau) * policy.w_min) {
      d.employment = l_min;
      d.regime = MinWageRegime::SupplyConstrained;
    } else {
      d.employment = std::pow(
          a * tech.alpha / ((1.0 + policy.tau) * policy.w_min),
          1.0 / (1.0 - tech.alpha));
      d.regime = MinWageRegime::DemandConstrained;
    }
    d.wage = policy.w_min;
    d.profit = production_output(tech, a, d.employment) -
               (1.0 + policy.tau) * d.wage * d.employment;
  }
  d.profit -= policy.c_f;
  return d;
}

// Expected-profit maximizer of the informal firm. L_hi, the phi = 0 closed
// form, bounds the optimum from above (the penalty only shrinks it). Below
// the detection cap the objective is concave (concave surplus minus convex
// penalty), so golden section plus a bisection refinement of the FOC is
// exact; past the cap the penalty is the constant phi and the objective
// rises monotonically up to L_hi, leaving L_hi as the only other candidate.
inline FirmDecision informal_optimum(double a, const ProductionTech& tech,
                                     const LaborSupply& supply,
                                     const Policy& policy) {
  if (!(a > 0.0)) throw std::domain_error("informal_optimum: requires a > 0");
  const double a_eff = (1.0 - policy.delta) * a;
  const double l_hi = unconstrained_employment(a_eff, tech, supply, 0.0);

  FirmDecision d;
  d.status = FirmStatus::Informal;
  if (policy.phi == 0.0) {
    d.employment = l_hi;
  } else {
    auto objective = [&](double l) {
      return informal_objective(a, tech, supply, policy, l);
    };
    const double l_cap = std::min(policy.detection.l_bar, l_hi);
    double l = golden_section_maximize(objective, 0.0, l_cap, 1e-10);
    // FOC of the below-cap branch: marginal surplus minus marginal penalty.
    auto foc = [&](double x) {
      return a_eff * tech.alpha * std::pow(x, tech.alpha - 1.0) -
             supply.b * (1.0 + 1.0 / supply.eta) *
                 std::pow(x, 1.0 / supply.eta) -
             detection_prob_deriv(policy.detection, x) * policy.phi;
    };
    const double pad = 1e-7 * std::max(1.0, l_cap);
    const double lo = l - pad, hi = l + pad;
    if (lo > 0.0 && hi < l_cap && foc(lo) > 0.0 && foc(hi) < 0.0)
      l = bisect_root(foc, lo, hi, 1e-14 * std::max(1.0, l_cap));
    if (!std::isfinite(l) || l < 0.0)
      throw std::runtime_error(
          "informal_optimum: optimizer failed to bracket, a=" +
          std::to_string(a) + " l_hi=" + std::to_string(l_hi));
    if (l_hi > l_cap && objective(l_hi) > objective(l)) l = l_hi;
    if (objective(l) < 0.0) l = 0.0;  // shutting down is always feasible
    d.employment = l;
  }
  d.wage = supply_wage(supply, d.employment);
  d.detection_prob = detection_prob(policy.detection, d.employment);
  d.profit = informal_objective(a, tech, supply, policy, d.employment);
  return d;
}

}  // namespace firmlab

#endif
