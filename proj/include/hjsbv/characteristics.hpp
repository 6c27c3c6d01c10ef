#pragma once

#include <algorithm>
#include <vector>

#include "hjsbv/convex_tools.hpp"
#include "hjsbv/hopf_lax.hpp"

namespace hjsbv {

/// Image of one node under X_{t,s}(x) = x - (t - s) DH(du_t(x)).
struct CharacteristicSample {
  std::size_t node = 0;
  Point x{0.0, 0.0};
  Box source_box;
  bool unique = true;
  Point chi{0.0, 0.0};
  // The map is continuous across the edge to the +axis neighbour.
  bool continuous_plus[2] = {false, false};
};

struct CharacteristicMap {
  GridDomain domain;
  double t = 0.0;
  double s = 0.0;
  std::vector<CharacteristicSample> samples;
  std::vector<std::int64_t> slot;  // node -> sample index, -1 if absent
  std::size_t skipped = 0;         // requested nodes on the support boundary

  const CharacteristicSample* at(std::int64_t node) const {
    if (node < 0) return nullptr;
    const auto k = slot[static_cast<std::size_t>(node)];
    return k < 0 ? nullptr : &samples[static_cast<std::size_t>(k)];
  }
};

namespace detail {

inline bool interior_node(const GridField& f, std::size_t k) {
  if (!f.finite(k)) return false;
  for (int a = 0; a < f.domain.dim; ++a)
    for (int dir : {-1, 1}) {
      auto nb = f.domain.neighbor(k, a, dir);
      if (nb < 0 || !f.finite(static_cast<std::size_t>(nb))) return false;
    }
  return true;
}

inline Box polytope_image(const HamiltonianModel& H, const SetValuedGradient& g, const Point& x, double tau,
                          int dim) {
  Box b;
  bool first = true;
  for (const auto& v : g.polytope) {
    const Point dh = H.gradient(v);
    Point img = x;
    for (int a = 0; a < dim; ++a) img[a] -= tau * dh[a];
    if (first) {
      b = Box::point(img);
      first = false;
    } else {
      b.expand(img, dim);
    }
  }
  return b;
}

inline void index_samples(CharacteristicMap& m) {
  m.slot.assign(m.domain.size(), -1);
  for (std::size_t i = 0; i < m.samples.size(); ++i)
    m.slot[m.samples[i].node] = static_cast<std::int64_t>(i);
}

inline std::vector<std::size_t> mask_nodes(const NodeMask& mask) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k]) out.push_back(k);
  return out;
}

}  // namespace detail

/// Characteristic map read off a single slice: uniqueness from the
/// superdifferential polytope, chi from its centroid.
inline CharacteristicMap characteristic_map(const GridField& ut, const HamiltonianModel& H, double t, double s,
                                            const NodeMask& nodes) {
  if (!(s >= 0.0) || !(s <= t)) throw DomainError("characteristic map needs 0 <= s <= t");
  const GridDomain& d = ut.domain;
  const double tol = gradient_tolerance(ut, semiconcavity_constant(ut));
  CharacteristicMap m;
  m.domain = d;
  m.t = t;
  m.s = s;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!nodes[k]) continue;
    if (!detail::interior_node(ut, k)) {
      ++m.skipped;
      continue;
    }
    const SetValuedGradient g = superdifferential(ut, k, tol);
    CharacteristicSample c;
    c.node = k;
    c.x = d.node(k);
    c.unique = g.single_valued;
    c.source_box = detail::polytope_image(H, g, c.x, t - s, d.dim);
    const Point dh = H.gradient(g.representative);
    c.chi = c.x;
    for (int a = 0; a < d.dim; ++a) c.chi[a] -= (t - s) * dh[a];
    m.samples.push_back(c);
  }
  detail::index_samples(m);
  for (auto& c : m.samples)
    for (int a = 0; a < d.dim; ++a) {
      const auto* nb = m.at(d.neighbor(c.node, a, +1));
      c.continuous_plus[a] = c.unique && nb && nb->unique;
    }
  return m;
}

/// Characteristic map of a solved slice. Uniqueness comes from the minimizer
/// set at each node and chi = (s/t) x + (1 - s/t) y is the point at time s on
/// the minimizing segment.
inline CharacteristicMap characteristic_map(const HopfLaxSolution& sol, double t, double s, const NodeMask& nodes) {
  if (!(t > 0.0) || !(s >= 0.0) || !(s <= t)) throw DomainError("characteristic map needs 0 <= s <= t, t > 0");
  auto sl = sol.slice(t);
  const GridField& ut = sl->field;
  const GridDomain& d = ut.domain;
  const HamiltonianModel& H = sol.model();
  const double tol = gradient_tolerance(ut, semiconcavity_constant(ut));
  const double w0 = s / t, w1 = 1.0 - s / t;
  CharacteristicMap m;
  m.domain = d;
  m.t = t;
  m.s = s;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!nodes[k]) continue;
    if (!detail::interior_node(ut, k)) {
      ++m.skipped;
      continue;
    }
    const NodeSummary& ns = sl->nodes[k];
    CharacteristicSample c;
    c.node = k;
    c.x = d.node(k);
    c.unique = ns.unique;
    for (int a = 0; a < d.dim; ++a) c.chi[a] = w0 * c.x[a] + w1 * ns.y[a];
    if (c.unique) {
      c.source_box = Box::point(c.chi);
    } else {
      const SetValuedGradient g = superdifferential(ut, k, tol);
      c.source_box = detail::polytope_image(H, g, c.x, t - s, d.dim);
      Point lo = c.x, hi = c.x;
      for (int a = 0; a < d.dim; ++a) {
        lo[a] = w0 * c.x[a] + w1 * ns.ybox.lower[a];
        hi[a] = w0 * c.x[a] + w1 * ns.ybox.upper[a];
      }
      c.source_box.expand(lo, d.dim);
      c.source_box.expand(hi, d.dim);
    }
    m.samples.push_back(c);
  }
  detail::index_samples(m);

  std::vector<std::pair<std::size_t, int>> probes;
  for (std::size_t i = 0; i < m.samples.size(); ++i) {
    auto& c = m.samples[i];
    for (int a = 0; a < d.dim; ++a) {
      const auto nb_node = d.neighbor(c.node, a, +1);
      const auto* nb = m.at(nb_node);
      if (!c.unique || !nb || !nb->unique) continue;
      const NodeSummary& p = sl->nodes[c.node];
      const NodeSummary& q = sl->nodes[static_cast<std::size_t>(nb_node)];
      if (dist(p.y, q.y, d.dim) <= 1.5 * d.max_h())
        c.continuous_plus[a] = true;
      else
        probes.emplace_back(i, a);
    }
  }
  // wide gaps between neighbouring feet: probe the edge midpoint
  std::vector<std::uint8_t> verdict(probes.size(), 0);
  parallel_for(probes.size(), [&](std::size_t j) {
    auto [i, a] = probes[j];
    const auto& c = m.samples[i];
    const auto nb_node = static_cast<std::size_t>(d.neighbor(c.node, a, +1));
    const NodeSummary& p = sl->nodes[c.node];
    const NodeSummary& q = sl->nodes[nb_node];
    Point mid = c.x, avg = p.y;
    const Point xn = d.node(nb_node);
    for (int b = 0; b < d.dim; ++b) {
      mid[b] = 0.5 * (c.x[b] + xn[b]);
      avg[b] = 0.5 * (p.y[b] + q.y[b]);
    }
    if (!d.in_cone(mid, t)) return;
    const MinimizerSet ms = sol.solve_point(t, mid);
    verdict[j] = ms.unique && dist(ms.minimizers.front(), avg, d.dim) <= 0.25 * dist(p.y, q.y, d.dim);
  });
  for (std::size_t j = 0; j < probes.size(); ++j)
    if (verdict[j]) m.samples[probes[j].first].continuous_plus[probes[j].second] = true;
  return m;
}

inline CharacteristicMap characteristic_map(const HopfLaxSolution& sol, double t, double s) {
  return characteristic_map(sol, t, s, mask_cone(sol.domain(), t));
}

struct InjectivityReport {
  std::vector<std::pair<std::size_t, std::size_t>> collisions;  // capped list of node pairs
  std::size_t collision_count = 0;
  bool pass = true;
};

/// Pairwise overlap test of source boxes after shrinking each by half a cell
/// per side; boxes thinner than a cell collapse to their centre.
inline InjectivityReport injectivity_report(const CharacteristicMap& m, std::size_t max_listed = 100) {
  const GridDomain& d = m.domain;
  const int n = d.dim;
  struct Item {
    Box b;
    std::size_t node;
  };
  std::vector<Item> items;
  items.reserve(m.samples.size());
  for (const auto& c : m.samples) {
    Box b = c.source_box;
    for (int a = 0; a < n; ++a) {
      const double lo = b.lower[a] + 0.5 * d.h[a], hi = b.upper[a] - 0.5 * d.h[a];
      if (lo <= hi) {
        b.lower[a] = lo;
        b.upper[a] = hi;
      } else {
        const double mid = 0.5 * (b.lower[a] + b.upper[a]);
        b.lower[a] = b.upper[a] = mid;
      }
    }
    items.push_back({b, c.node});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.b.lower[0] < b.b.lower[0]; });
  const double tol = 1e-8 * d.max_h();
  InjectivityReport r;
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[j].b.lower[0] > items[i].b.upper[0] + tol) break;
      bool overlap = true;
      for (int a = 1; a < n; ++a)
        if (items[j].b.lower[a] > items[i].b.upper[a] + tol || items[i].b.lower[a] > items[j].b.upper[a] + tol)
          overlap = false;
      if (!overlap) continue;
      ++r.collision_count;
      if (r.collisions.size() < max_listed)
        r.collisions.emplace_back(std::min(items[i].node, items[j].node), std::max(items[i].node, items[j].node));
    }
  r.pass = r.collision_count == 0;
  return r;
}

}  // namespace hjsbv
