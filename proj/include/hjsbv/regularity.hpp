#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hjsbv/characteristics.hpp"
#include "hjsbv/measure.hpp"

namespace hjsbv {

enum class ImageSelection { UniqueOnly, All };

struct ImageMeasureEstimate {
  double t = 0.0;
  double s = 0.0;
  double covered_volume = 0.0;
  double unique_fraction = 0.0;
  std::size_t nodes = 0;
  Box bounding_box;
};

namespace detail {

// Cell image of a unique node: reaches halfway to the neighbour's image across
// continuous edges and half a cell elsewhere.
inline Box cell_image(const CharacteristicMap& m, const CharacteristicSample& c) {
  const GridDomain& d = m.domain;
  Box b = Box::point(c.chi);
  for (int a = 0; a < d.dim; ++a) {
    const auto* up = m.at(d.neighbor(c.node, a, +1));
    const auto* dn = m.at(d.neighbor(c.node, a, -1));
    Point e = c.chi;
    if (up && c.continuous_plus[a]) {
      for (int k = 0; k < d.dim; ++k) e[k] = 0.5 * (c.chi[k] + up->chi[k]);
    } else {
      e[a] += 0.5 * d.h[a];
    }
    b.expand(e, d.dim);
    e = c.chi;
    if (dn && dn->continuous_plus[a]) {
      for (int k = 0; k < d.dim; ++k) e[k] = 0.5 * (c.chi[k] + dn->chi[k]);
    } else {
      e[a] -= 0.5 * d.h[a];
    }
    b.expand(e, d.dim);
  }
  return b;
}

}  // namespace detail

/// |X_{t,s}(E)| as the union volume of per-node cell images over E.
inline ImageMeasureEstimate image_measure(const CharacteristicMap& m, const NodeMask& E,
                                          ImageSelection sel = ImageSelection::UniqueOnly) {
  const GridDomain& d = m.domain;
  ImageMeasureEstimate est;
  est.t = m.t;
  est.s = m.s;
  std::vector<Box> boxes;
  std::size_t unique = 0;
  Point half{0.5 * d.h[0], 0.5 * d.h[1]};
  for (const auto& c : m.samples) {
    if (!E[c.node]) continue;
    ++est.nodes;
    if (c.unique) {
      ++unique;
      boxes.push_back(detail::cell_image(m, c));
    } else if (sel == ImageSelection::All) {
      boxes.push_back(c.source_box.inflated(half, d.dim));
    }
    if (sel != ImageSelection::All || !c.unique) continue;
    // a jump inside the cell: the superdifferential segment bridges both feet
    for (int a = 0; a < d.dim; ++a) {
      const auto* up = m.at(d.neighbor(c.node, a, +1));
      if (!up || !up->unique || !E[up->node] || c.continuous_plus[a]) continue;
      Box b = Box::point(c.chi);
      b.expand(up->chi, d.dim);
      Point pad{0.0, 0.0};
      if (d.dim == 2) pad[1 - a] = 0.5 * d.h[1 - a];
      boxes.push_back(b.inflated(pad, d.dim));
    }
  }
  if (est.nodes == 0) return est;
  est.unique_fraction = static_cast<double>(unique) / static_cast<double>(est.nodes);
  if (boxes.empty()) return est;
  est.bounding_box = boxes.front();
  for (const auto& b : boxes) {
    est.bounding_box.expand(b.lower, d.dim);
    est.bounding_box.expand(b.upper, d.dim);
  }
  est.covered_volume = union_volume(boxes, d.dim);
  return est;
}

/// F(t) = |chi_{t,0}(Omega_t)| over the nodes with a unique backward characteristic.
inline double f_functional(const HopfLaxSolution& sol, double t) {
  const NodeMask omega = mask_cone(sol.domain(), t);
  return image_measure(characteristic_map(sol, t, 0.0, omega), omega).covered_volume;
}

struct TraceDrop {
  std::size_t index = 0;  // drop between times[index] and times[index + 1]
  double time = 0.0;
  double drop = 0.0;
};

struct FTrace {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> band;    // image of Omega_{t_k} \ Omega_{t_{k+1}} at t_k
  std::vector<double> excess;  // F_k - F_{k+1} - band_k
  std::vector<TraceDrop> discontinuities;
  std::vector<TraceDrop> violations;  // increases beyond grid_slack
  double grid_slack = 0.0;
  std::vector<double> drop_tol;
  bool monotone = true;
};

/// F on a time grid, with drops beyond the cone shrinkage flagged as
/// discontinuities and increases beyond grid_slack as violations.
inline FTrace f_trace(const HopfLaxSolution& sol, const std::vector<double>& times) {
  if (times.empty()) throw DomainError("time grid must be nonempty");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0) || times[k] > sol.domain().horizon * (1.0 + 1e-12))
      throw DomainError("time grid must lie in (0, T]");
    if (k > 0 && !(times[k] > times[k - 1])) throw DomainError("time grid must increase");
  }
  const GridDomain& d = sol.domain();
  const double h = d.max_h();
  FTrace tr;
  tr.times = times;
  const std::size_t n = times.size();
  tr.values.resize(n);
  tr.band.assign(n, 0.0);
  tr.drop_tol.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const NodeMask omega = mask_cone(d, times[k]);
    const CharacteristicMap m = characteristic_map(sol, times[k], 0.0, omega);
    tr.values[k] = image_measure(m, omega).covered_volume;
    if (k + 1 < n) {
      const NodeMask next = mask_cone(d, times[k + 1]);
      NodeMask ring(omega.size(), 0);
      for (std::size_t i = 0; i < ring.size(); ++i) ring[i] = omega[i] && !next[i];
      tr.band[k] = image_measure(m, ring).covered_volume;
    }
    tr.drop_tol[k] = 5.0 * h * d.cone_perimeter(times[k]);
  }
  tr.grid_slack = 10.0 * h * d.cone_perimeter(times.front());
  tr.excess.assign(n > 0 ? n - 1 : 0, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    tr.excess[k] = tr.values[k] - tr.values[k + 1] - tr.band[k];
    const double rise = tr.values[k + 1] - tr.values[k];
    if (rise > tr.grid_slack) tr.violations.push_back({k, times[k], -rise});
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double neighbours = 0.0;
    if (k > 0) neighbours = std::max(neighbours, tr.excess[k - 1]);
    if (k + 2 < n) neighbours = std::max(neighbours, tr.excess[k + 1]);
    if (tr.excess[k] - neighbours > tr.drop_tol[k]) tr.discontinuities.push_back({k, times[k], tr.excess[k]});
  }
  tr.monotone = tr.violations.empty();
  return tr;
}

struct LemmaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double laplacian_mass = 0.0;
  double set_volume = 0.0;
  double epsilon = 0.0;
  bool pass = false;
};

/// Injectivity horizon of a solution: epsilon_bound(cH, C) with C the
/// semiconcavity constant of the initial data on Omega_0, capped at T.
inline double solution_epsilon(const HopfLaxSolution& sol, double safety = 0.5) {
  return epsilon_bound(sol.model().cH(), semiconcavity_constant(sol.initial_field()), safety, sol.domain().horizon);
}

/// |X_{t,delta}(E)| >= ((t - delta)/t)^n |X_{t,0}(E)| with 5% grid slack.
inline LemmaCheck compression_check(const HopfLaxSolution& sol, double t, double delta, const NodeMask& E) {
  if (!(delta >= 0.0) || !(delta <= t) || !(t > 0.0) || t > sol.domain().horizon * (1.0 + 1e-12))
    throw DomainError("compression check needs 0 <= delta <= t <= T");
  LemmaCheck r;
  r.epsilon = solution_epsilon(sol);
  if (t > r.epsilon * (1.0 + 1e-12)) throw DomainError("compression check needs t <= epsilon bound");
  const int n = sol.domain().dim;
  r.lhs = image_measure(characteristic_map(sol, t, delta, E), E, ImageSelection::All).covered_volume;
  const double base = image_measure(characteristic_map(sol, t, 0.0, E), E, ImageSelection::All).covered_volume;
  r.rhs = std::pow((t - delta) / t, n) * base;
  r.set_volume = static_cast<double>(mask_count(E)) * sol.domain().cell_volume();
  r.pass = r.lhs >= 0.95 * r.rhs;
  return r;
}

/// c0 = (n+1)(2 cH^2)^(-n), c1 = 2 cH (2 cH^2)^(-n).
inline std::pair<double, double> lower_bound_constants(double cH, int n) {
  const double base = std::pow(2.0 * cH * cH, -n);
  return {(n + 1) * base, 2.0 * cH * base};
}

/// Distributional Laplacian of the slice integrated over E: outward flux of
/// the one-sided differences across the faces of E.
inline double laplacian_mass(const GridField& f, const NodeMask& E) {
  const GridDomain& d = f.domain;
  double mass = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!E[k]) continue;
    if (!f.finite(k)) throw PreconditionError("set E leaves the slice support");
    for (int a = 0; a < d.dim; ++a) {
      double face = 1.0;
      for (int b = 0; b < d.dim; ++b)
        if (b != a) face *= d.h[b];
      for (int dir : {-1, 1}) {
        const auto nb = d.neighbor(k, a, dir);
        if (nb >= 0 && E[static_cast<std::size_t>(nb)]) continue;
        if (nb < 0 || !f.finite(static_cast<std::size_t>(nb)))
          throw PreconditionError("set E must stay inside the slice support");
        mass += (f.values[static_cast<std::size_t>(nb)] - f.values[k]) / d.h[a] * face;
      }
    }
  }
  return mass;
}

/// |X_{t,0}(E)| >= c0 |E| - c1 t Laplacian(u_t)(E), 5% of c0 |E| as grid slack.
inline LemmaCheck lower_bound_check(const HopfLaxSolution& sol, double t, const NodeMask& E) {
  if (!(t > 0.0) || t > sol.domain().horizon * (1.0 + 1e-12)) throw DomainError("time outside (0, T]");
  LemmaCheck r;
  r.epsilon = solution_epsilon(sol);
  if (t > r.epsilon * (1.0 + 1e-12)) throw DomainError("lower bound check needs t <= epsilon bound");
  const int n = sol.domain().dim;
  std::tie(r.c0, r.c1) = lower_bound_constants(sol.model().cH(), n);
  r.lhs = image_measure(characteristic_map(sol, t, 0.0, E), E, ImageSelection::All).covered_volume;
  r.laplacian_mass = laplacian_mass(sol.solve_slice(t), E);
  r.set_volume = static_cast<double>(mask_count(E)) * sol.domain().cell_volume();
  r.rhs = r.c0 * r.set_volume - r.c1 * t * r.laplacian_mass;
  r.pass = r.lhs >= r.rhs - 0.05 * r.c0 * r.set_volume;
  return r;
}

}  // namespace hjsbv
