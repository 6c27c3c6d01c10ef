#pragma once

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

#include "hjsbv/grid.hpp"

namespace hjsbv {

namespace detail {

struct Offset {
  int di, dj;
};

inline std::vector<Offset> semiconcavity_offsets(int dim) {
  if (dim == 1) return {{1, 0}, {2, 0}};
  return {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}, {2, 2}, {2, -2}};
}

inline std::int64_t shifted(const GridDomain& d, std::size_t idx, int di, int dj) {
  auto c = d.ij(idx);
  const std::int64_t i = static_cast<std::int64_t>(c[0]) + di;
  const std::int64_t j = static_cast<std::int64_t>(c[1]) + dj;
  if (i < 0 || i >= static_cast<std::int64_t>(d.count[0])) return -1;
  if (j < 0 || j >= static_cast<std::int64_t>(d.count[1])) return -1;
  return static_cast<std::int64_t>(d.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
}

// Max of the normalized second difference (f(x+o)+f(x-o)-2f(x))/|o|^2, with
// sign = -1 giving the same for -f.
inline double max_second_difference(const GridField& f, const NodeMask& inside, double sign) {
  const GridDomain& d = f.domain;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& o : semiconcavity_offsets(d.dim)) {
    const double ox = o.di * d.h[0], oy = d.dim == 2 ? o.dj * d.h[1] : 0.0;
    const double len2 = ox * ox + oy * oy;
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (!inside[k] || !f.finite(k)) continue;
      auto p = shifted(d, k, o.di, o.dj), m = shifted(d, k, -o.di, -o.dj);
      if (p < 0 || m < 0) continue;
      const auto pu = static_cast<std::size_t>(p), mu = static_cast<std::size_t>(m);
      if (!inside[pu] || !inside[mu] || !f.finite(pu) || !f.finite(mu)) continue;
      best = std::max(best, sign * (f.values[pu] + f.values[mu] - 2.0 * f.values[k]) / len2);
    }
  }
  return best;
}

inline NodeMask support_mask(const GridField& f) {
  NodeMask m(f.values.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = f.finite(k) ? 1 : 0;
  return m;
}

}  // namespace detail

/// Discrete semiconcavity constant on the sub-box K: the largest normalized
/// second difference over axis and diagonal offsets of one and two steps,
/// clamped below at zero.
inline double semiconcavity_constant(const GridField& f, const Box& K) {
  const GridDomain& d = f.domain;
  for (int a = 0; a < d.dim; ++a) {
    const double lo = std::max(K.lower[a], d.lower[a]), hi = std::min(K.upper[a], d.upper[a]);
    if (std::floor((hi - d.lower[a]) / d.h[a] + 1e-9) - std::ceil((lo - d.lower[a]) / d.h[a] - 1e-9) + 1 < 3)
      throw DomainError("semiconcavity sub-box holds fewer than 3 nodes per axis");
  }
  NodeMask inside = mask_box(d, K);
  return std::max(0.0, detail::max_second_difference(f, inside, +1.0));
}

/// Semiconcavity constant over the whole finite support of f.
inline double semiconcavity_constant(const GridField& f) {
  return std::max(0.0, detail::max_second_difference(f, detail::support_mask(f), +1.0));
}

/// Semiconcavity constant of -f, i.e. the concavity bound of f.
inline double concavity_constant(const GridField& f) {
  return std::max(0.0, detail::max_second_difference(f, detail::support_mask(f), -1.0));
}

struct SetValuedGradient {
  std::size_t node = 0;
  std::vector<Point> polytope;
  bool single_valued = true;
  Point representative{0.0, 0.0};
  double diameter = 0.0;
};

/// Resolution-aware single-valuedness threshold 10 h max(K, C), where K is the
/// semiconcavity constant and C the Lipschitz bound of the field.
inline double gradient_tolerance(const GridField& f, double semiconcavity) {
  return 10.0 * f.domain.max_h() * std::max(semiconcavity, f.lipschitz_bound) + 1e-9;
}

/// Hull of the one-sided difference-quotient gradients at an interior node.
inline SetValuedGradient superdifferential(const GridField& f, std::size_t node, double grad_tol) {
  const GridDomain& d = f.domain;
  if (node >= d.size() || !f.finite(node)) throw DomainError("superdifferential at a node outside the support");
  double fwd[2] = {0.0, 0.0}, bwd[2] = {0.0, 0.0};
  for (int a = 0; a < d.dim; ++a) {
    auto p = d.neighbor(node, a, +1), m = d.neighbor(node, a, -1);
    if (p < 0 || m < 0 || !f.finite(static_cast<std::size_t>(p)) || !f.finite(static_cast<std::size_t>(m)))
      throw DomainError("superdifferential requested at a boundary node");
    fwd[a] = (f.values[static_cast<std::size_t>(p)] - f.values[node]) / d.h[a];
    bwd[a] = (f.values[node] - f.values[static_cast<std::size_t>(m)]) / d.h[a];
  }
  SetValuedGradient g;
  g.node = node;
  for (int mask = 0; mask < (1 << d.dim); ++mask) {
    Point v{0.0, 0.0};
    for (int a = 0; a < d.dim; ++a) v[a] = (mask >> a) & 1 ? fwd[a] : bwd[a];
    g.polytope.push_back(v);
  }
  for (int a = 0; a < d.dim; ++a) g.representative[a] = 0.5 * (fwd[a] + bwd[a]);
  for (std::size_t i = 0; i < g.polytope.size(); ++i)
    for (std::size_t j = i + 1; j < g.polytope.size(); ++j)
      g.diameter = std::max(g.diameter, dist(g.polytope[i], g.polytope[j], d.dim));
  g.single_valued = g.diameter <= grad_tol;
  return g;
}

inline SetValuedGradient superdifferential(const GridField& f, std::size_t node) {
  return superdifferential(f, node, gradient_tolerance(f, semiconcavity_constant(f)));
}

/// Which inf/sup-convolution moreau_regularize computes.
///  Lower: x -> min_y f(y) + |x-y|^2 / (2 eps)   (Moreau envelope from below)
///  Upper: x -> max_y f(y) - |x-y|^2 / (2 eps)   (its gradient is the Hille-Yosida
///         approximation of the superdifferential, graph {(x - eps p, p)})
enum class EnvelopeSide { Lower, Upper };

/// Exact discrete envelope: every grid node of the support is a candidate.
/// The Lower side degenerates when eps times the concavity bound reaches 1,
/// the Upper side when eps times the semiconcavity constant reaches 1.
inline GridField moreau_regularize(const GridField& f, double eps, EnvelopeSide side = EnvelopeSide::Lower) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  const double curvature = side == EnvelopeSide::Lower ? concavity_constant(f) : semiconcavity_constant(f);
  if (eps * curvature >= 1.0) throw PreconditionError("eps times the curvature bound must be below 1");

  const GridDomain& d = f.domain;
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (f.finite(k)) support.push_back(k);
  std::vector<Point> nodes(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) nodes[k] = d.node(k);

  GridField out{d, f.time, std::vector<double>(d.size(), kNaN), f.lipschitz_bound};
  const double inv = 1.0 / (2.0 * eps);
  parallel_for(support.size(), [&](std::size_t s) {
    const std::size_t k = support[s];
    const Point& x = nodes[k];
    double best = side == EnvelopeSide::Lower ? std::numeric_limits<double>::infinity()
                                              : -std::numeric_limits<double>::infinity();
    for (std::size_t y : support) {
      double r2 = 0.0;
      for (int a = 0; a < d.dim; ++a) r2 += (x[a] - nodes[y][a]) * (x[a] - nodes[y][a]);
      if (side == EnvelopeSide::Lower)
        best = std::min(best, f.values[y] + r2 * inv);
      else
        best = std::max(best, f.values[y] - r2 * inv);
    }
    out.values[k] = best;
  });
  out.lipschitz_bound = std::max(f.lipschitz_bound, out.discrete_lipschitz());
  return out;
}

/// Finite sample of a set-valued map's graph in R^n x R^n.
struct GraphPoint {
  Point x{0.0, 0.0};
  Point y{0.0, 0.0};
};
struct Graph {
  int dim = 1;
  std::vector<GraphPoint> points;
};

/// Psi_eps(x, y) = (x - eps y, y).
inline Graph yosida_graph_transform(const Graph& g, double eps) {
  if (g.points.empty()) throw DomainError("graph must be nonempty");
  if (eps < 0.0) throw DomainError("eps must be nonnegative");
  Graph out{g.dim, {}};
  out.points.reserve(g.points.size());
  for (const auto& gp : g.points) {
    GraphPoint q = gp;
    for (int a = 0; a < g.dim; ++a) q.x[a] = gp.x[a] - eps * gp.y[a];
    out.points.push_back(q);
  }
  return out;
}

struct MonotoneReport {
  bool pass = true;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
  double worst_value = -std::numeric_limits<double>::infinity();
};

/// Checks <y1 - y2, x1 - x2> <= 0 over all pairs (slack 1e-12).
inline MonotoneReport monotone_check(const Graph& g) {
  MonotoneReport rep;
  const auto& P = g.points;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      double s = 0.0;
      for (int a = 0; a < g.dim; ++a) s += (P[i].y[a] - P[j].y[a]) * (P[i].x[a] - P[j].x[a]);
      if (s > rep.worst_value) {
        rep.worst_value = s;
        rep.worst_pair = std::make_pair(i, j);
      }
    }
  rep.pass = !(rep.worst_value > 1e-12);
  if (rep.pass) rep.worst_pair.reset();
  return rep;
}

/// Graph of the central-difference supergradient selection at interior nodes,
/// minus shift * x (shift = C turns a C-semiconcave field into a concave one).
inline Graph supergradient_graph(const GridField& f, double shift, bool polytope_vertices = false) {
  Graph g{f.domain.dim, {}};
  const double tol = gradient_tolerance(f, semiconcavity_constant(f));
  for (std::size_t k = 0; k < f.domain.size(); ++k) {
    if (!f.finite(k)) continue;
    bool interior = true;
    for (int a = 0; a < f.domain.dim && interior; ++a)
      for (int dir : {-1, 1}) {
        auto nb = f.domain.neighbor(k, a, dir);
        if (nb < 0 || !f.finite(static_cast<std::size_t>(nb))) interior = false;
      }
    if (!interior) continue;
    const SetValuedGradient sg = superdifferential(f, k, tol);
    const Point x = f.domain.node(k);
    auto push = [&](const Point& p) {
      GraphPoint gp{x, p};
      for (int a = 0; a < g.dim; ++a) gp.y[a] -= shift * x[a];
      g.points.push_back(gp);
    };
    if (polytope_vertices)
      for (const auto& v : sg.polytope) push(v);
    else
      push(sg.representative);
  }
  return g;
}

struct DetMonotoneReport {
  double det_E = 0.0;
  double det_D = 0.0;
  bool pass = false;
};

/// For symmetric PSD D <= E: det E >= det D.
inline DetMonotoneReport psd_det_monotone(const Eigen::MatrixXd& E, const Eigen::MatrixXd& D) {
  if (E.rows() != E.cols() || D.rows() != D.cols() || E.rows() != D.rows())
    throw DomainError("matrices must be square and of equal size");
  const double scale = 1.0 + std::max(E.cwiseAbs().maxCoeff(), D.cwiseAbs().maxCoeff());
  if ((E - E.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale ||
      (D - D.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("matrices must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ed(D, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gap(E - D, Eigen::EigenvaluesOnly);
  if (ed.eigenvalues().minCoeff() < -1e-12 || gap.eigenvalues().minCoeff() < -1e-12)
    throw DomainError("need D >= 0 and E - D >= 0");
  DetMonotoneReport r;
  r.det_E = E.determinant();
  r.det_D = D.determinant();
  r.pass = r.det_E >= r.det_D - 1e-12;
  return r;
}

struct TraceBoundReport {
  double trace = 0.0;
  bool pass = false;
};

/// For symmetric M <= 0 with |M|_F = 1: -Tr M >= 1.
inline TraceBoundReport trace_norm_bound(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw DomainError("matrix must be square");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("matrix must be symmetric");
  if (std::abs(M.norm() - 1.0) > 1e-9) throw DomainError("matrix must have unit Frobenius norm");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().maxCoeff() > 1e-12) throw DomainError("matrix must be negative semidefinite");
  TraceBoundReport r;
  r.trace = M.trace();
  r.pass = -r.trace >= 1.0 - 1e-9;
  return r;
}

}  // namespace hjsbv
