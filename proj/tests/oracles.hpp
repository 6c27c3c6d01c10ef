#pragma once

// Independent reference computations used as test oracles.

#include <cmath>
#include <functional>

namespace oracle {

// Root of a nondecreasing scalar map by bisection.
inline double bisect(const std::function<double(double)>& f, double target, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// sup_p p.q - H(p) over [-w, w]^n: coarse grid then two zoom passes.
inline double grid_conjugate(const std::function<double(double, double)>& H, int dim, double q0, double q1,
                             double w) {
  double cx = 0.0, cy = 0.0, best = -1e300, span = w;
  for (int pass = 0; pass < 4; ++pass) {
    const int n = 200;
    double bx = cx, by = cy;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= (dim == 2 ? n : 0); ++j) {
        const double px = cx - span + 2.0 * span * i / n;
        const double py = dim == 2 ? cy - span + 2.0 * span * j / n : 0.0;
        const double v = px * q0 + py * q1 - H(px, py);
        if (v > best) {
          best = v;
          bx = px;
          by = py;
        }
      }
    cx = bx;
    cy = by;
    span *= 0.02;
  }
  return best;
}

}  // namespace oracle
