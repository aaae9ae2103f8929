#ifndef FIRMLAB_METAREG_HPP
#define FIRMLAB_METAREG_HPP

// Publication-bias toolkit: funnel-plot data, precision-weighted pooling,
// the FAT-PET meta-regression, and a seeded Monte Carlo that manufactures
// censored study literatures.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "firmlab/rng.hpp"

namespace firmlab {

struct StudyEstimate {
  double effect;
  double se;  // > 0
};

struct FatPetResult {
  double pet = 0.0;  // bias-corrected effect (intercept)
  double fat = 0.0;  // bias coefficient on the standard error (slope)
  double se_pet = 0.0;
  double se_fat = 0.0;
  int n = 0;
};

struct WlsFit {
  double intercept = 0.0;
  double slope = 0.0;
  double se_intercept = 0.0;
  double se_slope = 0.0;
};

// Two-variable weighted least squares via the closed-form normal equations.
// Coefficient variances use the classical homoskedastic-in-weighted-space
// formula with n - 2 degrees of freedom.
inline WlsFit wls_fit(const std::vector<double>& xs,
                      const std::vector<double>& ys,
                      const std::vector<double>& weights) {
  const size_t n = xs.size();
  if (ys.size() != n || weights.size() != n)
    throw std::invalid_argument("wls_fit: length mismatch");
  if (n < 3) throw std::invalid_argument("wls_fit: need at least 3 points");

  double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0)
      throw std::invalid_argument("wls_fit: negative weight");
    sw += weights[i];
    swx += weights[i] * xs[i];
    swy += weights[i] * ys[i];
    swxx += weights[i] * xs[i] * xs[i];
    swxy += weights[i] * xs[i] * ys[i];
  }
  if (sw <= 0.0) throw std::invalid_argument("wls_fit: weights sum to zero");
  const double det = sw * swxx - swx * swx;
  if (!(det > 1e-14 * sw * swxx))
    throw std::runtime_error("wls_fit: singular design (all x values equal)");

  WlsFit fit;
  fit.slope = (sw * swxy - swx * swy) / det;
  fit.intercept = (swxx * swy - swx * swxy) / det;

  double wrss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    wrss += weights[i] * r * r;
  }
  const double s2 = wrss / static_cast<double>(n - 2);
  fit.se_intercept = std::sqrt(s2 * swxx / det);
  fit.se_slope = std::sqrt(s2 * sw / det);
  return fit;
}

// Precision-weighted regression of effects on their standard errors:
// effect_i = pet + fat * se_i + error, weights 1/se_i^2. Algebraically
// identical to the unweighted regression of t-statistics on precision.
inline FatPetResult fat_pet(const std::vector<StudyEstimate>& studies) {
  if (studies.size() < 3)
    throw std::invalid_argument("fat_pet: need at least 3 studies");
  std::vector<double> xs, ys, ws;
  xs.reserve(studies.size());
  ys.reserve(studies.size());
  ws.reserve(studies.size());
  for (const auto& s : studies) {
    if (!(s.se > 0.0)) throw std::domain_error("fat_pet: requires se > 0");
    xs.push_back(s.se);
    ys.push_back(s.effect);
    ws.push_back(1.0 / (s.se * s.se));
  }
  WlsFit fit;
  try {
    fit = wls_fit(xs, ys, ws);
  } catch (const std::runtime_error&) {
    throw std::runtime_error(
        "fat_pet: FAT unidentified, all standard errors are equal");
  }
  return {fit.intercept, fit.slope, fit.se_intercept, fit.se_slope,
          static_cast<int>(studies.size())};
}

// Inverse-variance weighted mean of the published effects.
inline double naive_pooled_mean(const std::vector<StudyEstimate>& studies) {
  if (studies.empty())
    throw std::invalid_argument("naive_pooled_mean: no studies");
  double num = 0.0, den = 0.0;
  for (const auto& s : studies) {
    const double w = 1.0 / (s.se * s.se);
    num += w * s.effect;
    den += w;
  }
  return num / den;
}

// Funnel-plot coordinates: effect against precision 1/se, order preserved.
inline std::vector<std::pair<double, double>> funnel_points(
    const std::vector<StudyEstimate>& studies) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(studies.size());
  for (const auto& s : studies) pts.emplace_back(s.effect, 1.0 / s.se);
  return pts;
}

// Selective-publication rule applied to a candidate estimate; estimates
// that fail are still published with probability p_keep.
struct CensorRule {
  enum class Kind { None, TwoSidedSig, NegativeSig } kind = Kind::None;
  double p_keep = 1.0;

  static CensorRule none() { return {Kind::None, 1.0}; }
  static CensorRule two_sided_sig(double p_keep) {
    return {Kind::TwoSidedSig, p_keep};
  }
  static CensorRule negative_sig(double p_keep) {
    return {Kind::NegativeSig, p_keep};
  }

  bool passes(double effect, double se) const {
    const double t = effect / se;
    switch (kind) {
      case Kind::None: return true;
      case Kind::TwoSidedSig: return std::fabs(t) >= 1.96;
      default: return effect < 0.0 && std::fabs(t) >= 1.96;
    }
  }
};

// Draws studies (se ~ Uniform[se_lo, se_hi), effect ~ Normal(true, se^2))
// and publishes the ones the rule admits until n are collected. Fully
// determined by the seed.
inline std::vector<StudyEstimate> simulate_studies(double true_effect, int n,
                                                   double se_lo, double se_hi,
                                                   const CensorRule& rule,
                                                   uint64_t seed) {
  if (!(se_lo > 0.0 && se_lo < se_hi))
    throw std::domain_error("simulate_studies: requires 0 < se_lo < se_hi");
  if (n < 1) throw std::domain_error("simulate_studies: requires n >= 1");
  if (!(rule.p_keep >= 0.0 && rule.p_keep <= 1.0))
    throw std::domain_error("simulate_studies: p_keep must lie in [0,1]");

  SplitMix64 rng(seed);
  std::vector<StudyEstimate> published;
  published.reserve(static_cast<size_t>(n));
  const long max_attempts = 1000L * n;
  for (long attempt = 0;
       attempt < max_attempts && published.size() < static_cast<size_t>(n);
       ++attempt) {
    const double se = se_lo + rng.next_uniform() * (se_hi - se_lo);
    const double effect = true_effect + se * rng.next_normal();
    bool publish = rule.passes(effect, se);
    if (!publish) publish = rng.next_uniform() < rule.p_keep;
    if (publish) published.push_back({effect, se});
  }
  if (published.size() < static_cast<size_t>(n))
    throw std::runtime_error(
        "simulate_studies: censoring rule too restrictive, attempt budget "
        "exhausted");
  return published;
}

}  // namespace firmlab

#endif
