#ifndef FIRMLAB_OPTIMIZE_HPP
#define FIRMLAB_OPTIMIZE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace firmlab {

// Golden-section maximizer on [lo, hi]. Returns the midpoint of the final
// bracket once its width falls below tol_x.
inline double golden_section_maximize(const std::function<double(double)>& f,
                                      double lo, double hi, double tol_x) {
  if (!(lo <= hi)) throw std::invalid_argument("golden_section: lo > hi");
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;  // 1/phi
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  // width shrinks by invphi each step; cap iterations defensively
  for (int it = 0; it < 400 && (b - a) > tol_x; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Bisection for a root of g on [lo, hi]; requires a sign change.
// Converges to |hi - lo| <= tol_x and returns the midpoint.
inline double bisect_root(const std::function<double(double)>& g, double lo,
                          double hi, double tol_x) {
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (glo * ghi > 0.0)
    throw std::runtime_error("bisect_root: interval does not bracket a root");
  for (int it = 0; it < 200 && (hi - lo) > tol_x; ++it) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (gm == 0.0) return mid;
    if (glo * gm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace firmlab

#endif
