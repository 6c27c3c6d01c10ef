#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "hjsbv/core.hpp"

namespace hjsbv {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Rectangular node grid carrying the shrinking cone
/// Omega_t = { |x - center| <= R + coneRate (T - t) }.
struct GridDomain {
  int dim = 1;
  Point lower{0.0, 0.0};
  Point upper{0.0, 0.0};
  Point h{1.0, 1.0};
  double cone_rate = 0.0;
  double horizon = 1.0;
  std::array<std::size_t, 2> count{1, 1};

  /// Box grid with the given spacing; `upper` is snapped to the last node.
  static GridDomain box(int dim, Point lower, Point upper, Point h, double cone_rate = 0.0,
                        double horizon = 1.0) {
    check_dim(dim);
    GridDomain d;
    d.dim = dim;
    d.lower = lower;
    d.h = h;
    d.cone_rate = cone_rate;
    d.horizon = horizon;
    for (int a = 0; a < dim; ++a) {
      if (!(h[a] > 0.0)) throw DomainError("grid spacing must be positive");
      if (!(upper[a] > lower[a])) throw DomainError("grid box must have lower < upper");
      const double cells = std::round((upper[a] - lower[a]) / h[a]);
      d.count[a] = static_cast<std::size_t>(cells) + 1;
      d.upper[a] = lower[a] + cells * h[a];
    }
    d.validate();
    return d;
  }

  /// Symmetric grid covering Omega_0 = B(0, R + coneRate T) with spacing h.
  /// The node count per axis is odd so the origin is a node.
  static GridDomain cone(int dim, double radius, double cone_rate, double horizon, double h) {
    check_dim(dim);
    if (!(radius > 0.0) || !(cone_rate >= 0.0) || !(horizon > 0.0) || !(h > 0.0))
      throw DomainError("cone domain needs R > 0, C' >= 0, T > 0, h > 0");
    const double half = radius + cone_rate * horizon;
    std::size_t cells_half = static_cast<std::size_t>(std::ceil(half / h - 1e-9));
    GridDomain d;
    d.dim = dim;
    d.cone_rate = cone_rate;
    d.horizon = horizon;
    for (int a = 0; a < dim; ++a) {
      d.h[a] = h;
      d.count[a] = 2 * cells_half + 1;
      d.lower[a] = -static_cast<double>(cells_half) * h;
      d.upper[a] = static_cast<double>(cells_half) * h;
    }
    d.validate();
    return d;
  }

  void validate() const {
    check_dim(dim);
    for (int a = 0; a < dim; ++a) {
      if (!(lower[a] < upper[a])) throw DomainError("grid box must have lower < upper");
      if (count[a] < 3) throw DomainError("grid needs at least 3 nodes per axis");
    }
    if (!(radius() > 0.0)) throw DomainError("cone radius R must be positive");
  }

  std::size_t size() const { return count[0] * count[1]; }
  std::size_t nx() const { return count[0]; }
  std::size_t ny() const { return count[1]; }
  double max_h() const { return dim == 1 ? h[0] : std::max(h[0], h[1]); }
  double cell_volume() const { return dim == 1 ? h[0] : h[0] * h[1]; }

  std::size_t index(std::size_t i, std::size_t j = 0) const { return i + count[0] * j; }
  std::array<std::size_t, 2> ij(std::size_t idx) const { return {idx % count[0], idx / count[0]}; }

  Point node(std::size_t idx) const {
    auto [i, j] = ij(idx);
    Point p{lower[0] + h[0] * static_cast<double>(i), 0.0};
    if (dim == 2) p[1] = lower[1] + h[1] * static_cast<double>(j);
    return p;
  }

  Point center() const {
    Point c{0.0, 0.0};
    for (int a = 0; a < dim; ++a) c[a] = 0.5 * (lower[a] + upper[a]);
    return c;
  }

  /// R: the inscribed half-width minus the cone growth over [0, T].
  double radius() const {
    double half = std::numeric_limits<double>::infinity();
    for (int a = 0; a < dim; ++a) half = std::min(half, 0.5 * (upper[a] - lower[a]));
    return half - cone_rate * horizon;
  }

  double cone_radius(double t) const { return radius() + cone_rate * (horizon - t); }

  bool in_cone(const Point& x, double t) const {
    return dist(x, center(), dim) <= cone_radius(t) * (1.0 + 1e-12) + 1e-12;
  }

  /// |Omega_t| and the measure of its boundary.
  double cone_volume(double t) const {
    const double r = cone_radius(t);
    return dim == 1 ? 2.0 * r : std::numbers::pi * r * r;
  }
  double cone_perimeter(double t) const {
    return dim == 1 ? 2.0 : 2.0 * std::numbers::pi * cone_radius(t);
  }

  /// Neighbour index along `axis` in direction dir = +-1, or -1 if off grid.
  std::int64_t neighbor(std::size_t idx, int axis, int dir) const {
    auto c = ij(idx);
    const std::int64_t k = static_cast<std::int64_t>(c[axis]) + dir;
    if (k < 0 || k >= static_cast<std::int64_t>(count[axis])) return -1;
    c[axis] = static_cast<std::size_t>(k);
    return static_cast<std::int64_t>(index(c[0], c[1]));
  }
};

using NodeMask = std::vector<std::uint8_t>;

/// Sampled u(t, .) over the grid; NaN marks nodes outside the field's support.
struct GridField {
  GridDomain domain;
  double time = 0.0;
  std::vector<double> values;
  double lipschitz_bound = 0.0;

  static GridField sample(const GridDomain& d, double t, const std::function<double(const Point&)>& fn,
                          double lipschitz_bound) {
    GridField f{d, t, std::vector<double>(d.size()), lipschitz_bound};
    for (std::size_t k = 0; k < d.size(); ++k) f.values[k] = fn(d.node(k));
    return f;
  }

  bool finite(std::size_t idx) const { return std::isfinite(values[idx]); }

  /// Linear (1-d) or bilinear (2-d) interpolation; NaN outside the support.
  double interpolate(const Point& x) const {
    const GridDomain& d = domain;
    std::size_t base[2] = {0, 0};
    double w[2] = {0.0, 0.0};
    for (int a = 0; a < d.dim; ++a) {
      const double s = (x[a] - d.lower[a]) / d.h[a];
      if (s < -1e-9 || s > static_cast<double>(d.count[a] - 1) + 1e-9) return kNaN;
      double fl = std::floor(s);
      fl = std::clamp(fl, 0.0, static_cast<double>(d.count[a] - 2));
      base[a] = static_cast<std::size_t>(fl);
      w[a] = std::clamp(s - fl, 0.0, 1.0);
    }
    if (d.dim == 1) {
      const double v0 = values[base[0]], v1 = values[base[0] + 1];
      if (w[0] == 0.0) return v0;
      if (w[0] == 1.0) return v1;
      return (1.0 - w[0]) * v0 + w[0] * v1;
    }
    double acc = 0.0;
    for (int cj = 0; cj < 2; ++cj)
      for (int ci = 0; ci < 2; ++ci) {
        const double wt = (ci ? w[0] : 1.0 - w[0]) * (cj ? w[1] : 1.0 - w[1]);
        if (wt == 0.0) continue;
        acc += wt * values[d.index(base[0] + ci, base[1] + cj)];
      }
    return acc;
  }

  /// max over adjacent finite node pairs of |difference| / h.
  double discrete_lipschitz() const {
    double best = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!finite(k)) continue;
      for (int a = 0; a < domain.dim; ++a) {
        auto nb = domain.neighbor(k, a, +1);
        if (nb < 0 || !finite(static_cast<std::size_t>(nb))) continue;
        best = std::max(best, std::abs(values[static_cast<std::size_t>(nb)] - values[k]) / domain.h[a]);
      }
    }
    return best;
  }

  bool lipschitz_ok() const { return discrete_lipschitz() <= lipschitz_bound * (1.0 + 1e-6) + 1e-12; }
};

/// Node mask of the axis box [lower, upper] intersected with `base` (if given).
inline NodeMask mask_box(const GridDomain& d, const Box& b, const NodeMask* base = nullptr) {
  NodeMask m(d.size(), 0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (base && !(*base)[k]) continue;
    m[k] = b.contains(d.node(k), d.dim, 1e-12) ? 1 : 0;
  }
  return m;
}

/// Nodes of Omega_t.
inline NodeMask mask_cone(const GridDomain& d, double t) {
  NodeMask m(d.size(), 0);
  for (std::size_t k = 0; k < d.size(); ++k) m[k] = d.in_cone(d.node(k), t) ? 1 : 0;
  return m;
}

inline std::size_t mask_count(const NodeMask& m) {
  return static_cast<std::size_t>(std::count(m.begin(), m.end(), std::uint8_t{1}));
}

}  // namespace hjsbv
