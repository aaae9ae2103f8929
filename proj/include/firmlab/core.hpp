#ifndef FIRMLAB_CORE_HPP
#define FIRMLAB_CORE_HPP

// Model primitives: production, firm-level labor supply, detection
// technology, and the policy/environment vector. All functions here are
// pure and cheap; everything else in the library is built on top of them.

#include <cmath>
#include <stdexcept>
#include <string>

namespace firmlab {

// Cobb-Douglas production q = a * l^alpha with 0 < alpha < 1.
struct ProductionTech {
  double alpha;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::domain_error("tech.alpha must lie in (0,1), got " +
                              std::to_string(alpha));
  }
};

// Isoelastic firm-level labor supply: w(L) = b * L^(1/eta), so the supply
// elasticity (dL/dw)*(w/L) is the constant eta.
struct LaborSupply {
  double b;
  double eta;

  void validate() const {
    if (!(b > 0.0))
      throw std::domain_error("supply.b must be > 0, got " + std::to_string(b));
    if (!(eta > 0.0))
      throw std::domain_error("supply.eta must be > 0, got " +
                              std::to_string(eta));
  }
};

// Detection probability pi_d(L) = min(1, (L/l_bar)^gamma), gamma >= 1 so the
// expected penalty is convex below the cap.
struct DetectionTech {
  double l_bar;
  double gamma;

  void validate() const {
    if (!(l_bar > 0.0))
      throw std::domain_error("policy.detection.l_bar must be > 0, got " +
                              std::to_string(l_bar));
    if (!(gamma >= 1.0))
      throw std::domain_error("policy.detection.gamma must be >= 1, got " +
                              std::to_string(gamma));
  }
};

// The full regulatory environment a firm faces.
struct Policy {
  double tau = 0.0;    // payroll tax rate on the formal wage bill
  double c_f = 0.0;    // fixed per-period formality cost (output units)
  double w_min = 0.0;  // minimum wage; 0 means absent
  double phi = 0.0;    // fine paid on detection (output units)
  double delta = 0.0;  // informal productivity loss, in [0,1)
  DetectionTech detection{1.0, 1.0};

  void validate() const {
    if (!(tau >= 0.0))
      throw std::domain_error("policy.tau must be >= 0");
    if (!(c_f >= 0.0))
      throw std::domain_error("policy.c_f must be >= 0");
    if (!(w_min >= 0.0))
      throw std::domain_error("policy.w_min must be >= 0");
    if (!(phi >= 0.0))
      throw std::domain_error("policy.phi must be >= 0");
    if (!(delta >= 0.0 && delta < 1.0))
      throw std::domain_error("policy.delta must lie in [0,1)");
    detection.validate();
  }
};

inline double production_output(const ProductionTech& tech, double a,
                                double l) {
  if (a < 0.0 || l < 0.0)
    throw std::domain_error("production_output: negative input");
  if (l == 0.0) return 0.0;
  return a * std::pow(l, tech.alpha);
}

// MRPL = a * alpha * l^(alpha-1); diverges at l = 0 for alpha < 1.
inline double marginal_product(const ProductionTech& tech, double a,
                               double l) {
  if (!(l > 0.0))
    throw std::domain_error("marginal_product: requires l > 0");
  return a * tech.alpha * std::pow(l, tech.alpha - 1.0);
}

inline double supply_wage(const LaborSupply& s, double l) {
  if (l < 0.0) throw std::domain_error("supply_wage: negative employment");
  return s.b * std::pow(l, 1.0 / s.eta);
}

inline double supply_employment(const LaborSupply& s, double w) {
  if (w < 0.0) throw std::domain_error("supply_employment: negative wage");
  return std::pow(w / s.b, s.eta);
}

inline double detection_prob(const DetectionTech& d, double l) {
  if (l < 0.0) throw std::domain_error("detection_prob: negative employment");
  if (l >= d.l_bar) return 1.0;
  return std::pow(l / d.l_bar, d.gamma);
}

// d pi_d / dL on the interior branch; 0 past the cap.
inline double detection_prob_deriv(const DetectionTech& d, double l) {
  if (l < 0.0)
    throw std::domain_error("detection_prob_deriv: negative employment");
  if (l >= d.l_bar) return 0.0;
  return d.gamma / d.l_bar * std::pow(l / d.l_bar, d.gamma - 1.0);
}

}  // namespace firmlab

#endif
