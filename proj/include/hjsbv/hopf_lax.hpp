#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "hjsbv/grid.hpp"
#include "hjsbv/hamiltonian.hpp"

namespace hjsbv {

/// Argmin set of y -> u0(y) + t L((x - y) / t) at one point (t, x).
struct MinimizerSet {
  double t = 0.0;
  Point x{0.0, 0.0};
  std::vector<Point> minimizers;
  bool unique = true;
  double value = 0.0;
  double spread = 0.0;
  Box hull;
};

inline double min_gap_tol(double value) { return 1e-9 * (1.0 + std::abs(value)); }
inline double uniq_tol(const GridDomain& d) { return 3.0 * d.max_h(); }

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Data minimized against: nodal values on the grid (NaN = not a candidate)
/// plus a continuous evaluator used for sub-grid refinement.
struct DataSource {
  const GridDomain* domain = nullptr;
  const std::vector<double>* nodal = nullptr;
  std::function<double(const Point&)> eval;
  double lipschitz = 0.0;
};

inline double golden_min(const std::function<double(double)>& f, double a, double b, double& best_x) {
  constexpr double g = 0.6180339887498949;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  if (fc <= fd) {
    best_x = c;
    return fc;
  }
  best_x = d;
  return fd;
}

struct Candidate {
  Point y;
  double v;
};

class Minimizer {
 public:
  Minimizer(const HamiltonianModel& model, const DataSource& src) : model_(model), src_(src) {}

  MinimizerSet run(double tau, const Point& x) const {
    const GridDomain& d = *src_.domain;
    const double radius = tau * model_.max_speed() * (1.0 + 1e-12) + 1e-14;
    std::vector<Candidate> locals = d.dim == 1 ? locals_1d(tau, x, radius) : locals_2d(tau, x, radius);
    if (locals.empty()) throw DomainError("no admissible minimization candidates");

    for (auto& c : locals) refine(tau, x, c);
    std::sort(locals.begin(), locals.end(), [](const Candidate& a, const Candidate& b) { return a.v < b.v; });

    MinimizerSet out;
    out.t = tau;
    out.x = x;
    out.value = locals.front().v;
    const double gap = min_gap_tol(out.value);
    for (const auto& c : locals) {
      if (c.v > out.value + gap) break;
      bool dup = false;
      for (const auto& m : out.minimizers)
        if (dist(m, c.y, d.dim) <= 0.5 * d.max_h()) dup = true;
      if (!dup) out.minimizers.push_back(c.y);
    }
    out.hull = Box::point(out.minimizers.front());
    for (std::size_t i = 0; i < out.minimizers.size(); ++i) {
      out.hull.expand(out.minimizers[i], d.dim);
      for (std::size_t j = i + 1; j < out.minimizers.size(); ++j)
        out.spread = std::max(out.spread, dist(out.minimizers[i], out.minimizers[j], d.dim));
    }
    out.unique = out.spread <= uniq_tol(d);
    return out;
  }

 private:
  double phi(double tau, const Point& x, const Point& y) const {
    const double u = src_.eval(y);
    if (!std::isfinite(u)) return kInf;
    Point q{0.0, 0.0};
    for (int a = 0; a < src_.domain->dim; ++a) q[a] = (x[a] - y[a]) / tau;
    return u + tau * model_.lagrangian(q);
  }

  double band(double m) const {
    return 2.0 * (src_.lipschitz + model_.gradient_norm_bound()) * src_.domain->max_h() + 1e-12 * (1.0 + std::abs(m));
  }

  static void keep_lowest(std::vector<Candidate>& c) {
    if (c.size() <= 16) return;
    std::partial_sort(c.begin(), c.begin() + 16, c.end(),
                      [](const Candidate& a, const Candidate& b) { return a.v < b.v; });
    c.resize(16);
  }

  std::pair<std::int64_t, std::int64_t> axis_window(int a, double center, double radius) const {
    const GridDomain& d = *src_.domain;
    const double lo = (center - radius - d.lower[a]) / d.h[a], hi = (center + radius - d.lower[a]) / d.h[a];
    const double s = (center - d.lower[a]) / d.h[a];
    std::int64_t i0 = static_cast<std::int64_t>(std::ceil(std::min(lo, std::floor(s)) - 1e-9));
    std::int64_t i1 = static_cast<std::int64_t>(std::floor(std::max(hi, std::ceil(s)) + 1e-9));
    i0 = std::max<std::int64_t>(i0, 0);
    i1 = std::min<std::int64_t>(i1, static_cast<std::int64_t>(d.count[a]) - 1);
    return {i0, i1};
  }

  std::vector<Candidate> locals_1d(double tau, const Point& x, double radius) const {
    const GridDomain& d = *src_.domain;
    const auto& nodal = *src_.nodal;
    auto [i0, i1] = axis_window(0, x[0], radius);
    if (i1 < i0) return {};
    const std::size_t n = static_cast<std::size_t>(i1 - i0 + 1);
    std::vector<double> v(n, kInf);
    double m = kInf;
    const double inv_tau = 1.0 / tau;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = static_cast<std::size_t>(i0) + k;
      const double u = nodal[idx];
      if (!std::isfinite(u)) continue;
      const double y = d.lower[0] + d.h[0] * static_cast<double>(idx);
      v[k] = u + tau * model_.lagrangian({(x[0] - y) * inv_tau, 0.0});
      m = std::min(m, v[k]);
    }
    std::vector<Candidate> out;
    if (!std::isfinite(m)) return out;
    const double cut = m + band(m);
    for (std::size_t k = 0; k < n; ++k) {
      if (!(v[k] <= cut)) continue;
      const double l = k > 0 ? v[k - 1] : kInf, r = k + 1 < n ? v[k + 1] : kInf;
      if (v[k] <= l && v[k] <= r)
        out.push_back({{d.lower[0] + d.h[0] * static_cast<double>(static_cast<std::size_t>(i0) + k), 0.0}, v[k]});
    }
    keep_lowest(out);
    return out;
  }

  std::vector<Candidate> locals_2d(double tau, const Point& x, double radius) const {
    const GridDomain& d = *src_.domain;
    const auto& nodal = *src_.nodal;
    auto [i0, i1] = axis_window(0, x[0], radius);
    auto [j0, j1] = axis_window(1, x[1], radius);
    if (i1 < i0 || j1 < j0) return {};
    const std::size_t nx = static_cast<std::size_t>(i1 - i0 + 1), ny = static_cast<std::size_t>(j1 - j0 + 1);
    std::vector<double> v(nx * ny, kInf);
    double m = kInf;
    const double r2 = (radius + d.max_h()) * (radius + d.max_h());
    for (std::size_t b = 0; b < ny; ++b)
      for (std::size_t a = 0; a < nx; ++a) {
        const std::size_t idx = d.index(static_cast<std::size_t>(i0) + a, static_cast<std::size_t>(j0) + b);
        const double u = nodal[idx];
        if (!std::isfinite(u)) continue;
        const Point y = d.node(idx);
        const double dx = x[0] - y[0], dy = x[1] - y[1];
        if (dx * dx + dy * dy > r2) continue;
        v[a + nx * b] = u + tau * model_.lagrangian({dx / tau, dy / tau});
        m = std::min(m, v[a + nx * b]);
      }
    std::vector<Candidate> out;
    if (!std::isfinite(m)) return out;
    const double cut = m + band(m);
    for (std::size_t b = 0; b < ny; ++b)
      for (std::size_t a = 0; a < nx; ++a) {
        const double c = v[a + nx * b];
        if (!(c <= cut)) continue;
        bool local = true;
        for (int db = -1; db <= 1 && local; ++db)
          for (int da = -1; da <= 1; ++da) {
            if (!da && !db) continue;
            const auto aa = static_cast<std::int64_t>(a) + da, bb = static_cast<std::int64_t>(b) + db;
            if (aa < 0 || bb < 0 || aa >= static_cast<std::int64_t>(nx) || bb >= static_cast<std::int64_t>(ny)) continue;
            if (v[static_cast<std::size_t>(aa) + nx * static_cast<std::size_t>(bb)] < c) {
              local = false;
              break;
            }
          }
        if (local)
          out.push_back({d.node(d.index(static_cast<std::size_t>(i0) + a, static_cast<std::size_t>(j0) + b)), c});
      }
    keep_lowest(out);
    return out;
  }

  void refine(double tau, const Point& x, Candidate& c) const {
    const GridDomain& d = *src_.domain;
    if (d.dim == 1) {
      const double h = d.h[0];
      double best_y = c.y[0], best_v = c.v;
      for (int k = -8; k <= 8; ++k) {
        const double y = c.y[0] + h * k / 8.0;
        const double v = phi(tau, x, {y, 0.0});
        if (v < best_v) {
          best_v = v;
          best_y = y;
        }
      }
      double gy = best_y;
      const double gv = golden_min([&](double y) { return phi(tau, x, {y, 0.0}); }, best_y - h / 8.0,
                                   best_y + h / 8.0, gy);
      if (gv < best_v) {
        best_v = gv;
        best_y = gy;
      }
      c.y = {best_y, 0.0};
      c.v = best_v;
      return;
    }
    for (int sweep = 0; sweep < 6; ++sweep) {
      const double w = d.max_h() / static_cast<double>(1 << sweep);
      for (int a = 0; a < 2; ++a) {
        Point y = c.y;
        double gy = y[a];
        const double gv = golden_min(
            [&](double s) {
              Point p = y;
              p[a] = s;
              return phi(tau, x, p);
            },
            y[a] - w, y[a] + w, gy);
        if (gv < c.v) {
          c.v = gv;
          c.y[a] = gy;
        }
      }
    }
  }

  const HamiltonianModel& model_;
  const DataSource& src_;
};

}  // namespace detail

/// Per-node record of a solved slice.
struct NodeSummary {
  bool solved = false;
  bool unique = true;
  Point y{0.0, 0.0};
  Box ybox;
};

struct Slice {
  GridField field;
  std::vector<NodeSummary> nodes;
};

/// u(t, x) = min_y u0(y) + t L((x - y) / t) on the cone domain, with a cache of
/// solved time slices.
class HopfLaxSolution {
 public:
  using InitialData = std::function<double(const Point&)>;

  HopfLaxSolution(HamiltonianModel model, GridDomain domain, InitialData u0, double lipschitz)
      : model_(std::move(model)), domain_(domain), u0_(std::move(u0)), lipschitz_(lipschitz) {
    init();
  }

  HopfLaxSolution(HamiltonianModel model, const GridField& u0)
      : model_(std::move(model)), domain_(u0.domain), lipschitz_(u0.lipschitz_bound) {
    auto field = std::make_shared<const GridField>(u0);
    u0_ = [field](const Point& y) { return field->interpolate(y); };
    init();
  }

  /// Cone domain with C' = max |DH| + 1.
  static GridDomain cone_domain(const HamiltonianModel& model, double radius, double horizon, double h) {
    return GridDomain::cone(model.dim(), radius, model.max_speed() + 1.0, horizon, h);
  }

  const HamiltonianModel& model() const { return model_; }
  const GridDomain& domain() const { return domain_; }
  double lipschitz() const { return lipschitz_; }
  double u0(const Point& y) const { return u0_(y); }

  /// u0 on the nodes of Omega_0 (NaN elsewhere).
  GridField initial_field() const { return GridField{domain_, 0.0, u0_nodal_, lipschitz_}; }

  MinimizerSet solve_point(double t, const Point& x) const {
    if (!(t > 0.0) || t > domain_.horizon * (1.0 + 1e-12)) throw DomainError("time outside (0, T]");
    if (!all_finite(x, domain_.dim) || !domain_.in_cone(x, t)) throw DomainError("point outside the cone domain");
    return detail::Minimizer(model_, source_).run(t, x);
  }

  std::shared_ptr<const Slice> slice(double t) const {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(t);
      if (it != cache_.end()) return it->second;
    }
    if (t == 0.0) return store(t, initial_slice());
    if (!(t > 0.0) || t > domain_.horizon * (1.0 + 1e-12)) throw DomainError("time outside (0, T]");
    auto s = std::make_shared<Slice>();
    s->field = GridField{domain_, t, std::vector<double>(domain_.size(), kNaN), lipschitz_};
    s->nodes.assign(domain_.size(), NodeSummary{});
    const NodeMask inside = mask_cone(domain_, t);
    std::vector<std::size_t> todo;
    for (std::size_t k = 0; k < inside.size(); ++k)
      if (inside[k]) todo.push_back(k);
    const detail::Minimizer mz(model_, source_);
    parallel_for(todo.size(), [&](std::size_t i) {
      const std::size_t k = todo[i];
      const MinimizerSet ms = mz.run(t, domain_.node(k));
      s->field.values[k] = ms.value;
      s->nodes[k] = NodeSummary{true, ms.unique, ms.minimizers.front(), ms.hull};
    });
    return store(t, std::move(s));
  }

  const GridField& solve_slice(double t) const { return slice(t)->field; }

  /// max_x |u(t, x) - min_y [u(s, y) + (t - s) L((x - y) / (t - s))]| over the
  /// sampled nodes of Omega_t, using the cached slice at s as data.
  double functional_identity_residual(double s, double t, const std::vector<std::size_t>& sample_nodes) const {
    if (!(s >= 0.0) || !(s < t)) throw DomainError("functional identity needs 0 <= s < t");
    auto target = slice(t);
    auto data = slice(s);
    detail::DataSource src;
    src.domain = &domain_;
    src.nodal = &data->field.values;
    src.lipschitz = lipschitz_;
    if (s == 0.0)
      src.eval = u0_;
    else
      src.eval = [&data](const Point& y) { return data->field.interpolate(y); };
    const detail::Minimizer mz(model_, src);
    std::vector<std::size_t> nodes = sample_nodes;
    if (nodes.empty())
      for (std::size_t k = 0; k < domain_.size(); ++k)
        if (target->field.finite(k)) nodes.push_back(k);
    std::vector<double> res(nodes.size(), 0.0);
    parallel_for(nodes.size(), [&](std::size_t i) {
      const std::size_t k = nodes[i];
      if (!target->field.finite(k)) throw DomainError("sample node outside Omega_t");
      res[i] = std::abs(target->field.values[k] - mz.run(t - s, domain_.node(k)).value);
    });
    return res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
  }

  double func_id_tol() const { return 10.0 * domain_.max_h(); }

 private:
  void init() {
    if (model_.dim() != domain_.dim) throw PreconditionError("Hamiltonian and domain dimensions differ");
    if (domain_.cone_rate < model_.max_speed()) throw PreconditionError("cone rate must dominate max |DH|");
    if (!(lipschitz_ >= 0.0)) throw PreconditionError("Lipschitz bound must be nonnegative");
    u0_nodal_.assign(domain_.size(), kNaN);
    for (std::size_t k = 0; k < domain_.size(); ++k) {
      const Point y = domain_.node(k);
      if (domain_.in_cone(y, 0.0)) u0_nodal_[k] = u0_(y);
    }
    source_.domain = &domain_;
    source_.nodal = &u0_nodal_;
    source_.eval = u0_;
    source_.lipschitz = lipschitz_;
  }

  std::shared_ptr<Slice> initial_slice() const {
    auto s = std::make_shared<Slice>();
    s->field = initial_field();
    s->nodes.assign(domain_.size(), NodeSummary{});
    for (std::size_t k = 0; k < domain_.size(); ++k)
      if (s->field.finite(k)) s->nodes[k] = NodeSummary{true, true, domain_.node(k), Box::point(domain_.node(k))};
    return s;
  }

  std::shared_ptr<const Slice> store(double t, std::shared_ptr<const Slice> s) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = cache_.emplace(t, std::move(s));
    return it->second;
  }

  HamiltonianModel model_;
  GridDomain domain_;
  InitialData u0_;
  double lipschitz_ = 0.0;
  std::vector<double> u0_nodal_;
  detail::DataSource source_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::shared_ptr<const Slice>> cache_;
};

struct LinearProgrammingResult {
  bool pass = false;
  Point y{0.0, 0.0};
  Point z{0.0, 0.0};
};

/// Minimizing segments: with y the unique minimizer at (t, x), the point
/// z = (s/t) x + (1 - s/t) y at time s has the same unique minimizer.
inline LinearProgrammingResult linear_programming_check(const HopfLaxSolution& sol, double t, double s,
                                                        const Point& x) {
  if (!(s > 0.0) || !(s < t)) throw DomainError("linear programming check needs 0 < s < t");
  const MinimizerSet at_t = sol.solve_point(t, x);
  if (!at_t.unique) throw PreconditionError("minimizer at (t, x) is not unique");
  LinearProgrammingResult r;
  const int n = sol.domain().dim;
  r.y = at_t.minimizers.front();
  for (int a = 0; a < n; ++a) r.z[a] = (s / t) * x[a] + (1.0 - s / t) * r.y[a];
  const MinimizerSet at_s = sol.solve_point(s, r.z);
  r.pass = at_s.unique && dist(at_s.minimizers.front(), r.y, n) <= uniq_tol(sol.domain());
  return r;
}

/// Injectivity horizon safety / (2 cH C); unbounded for C = 0, then capped at `horizon`.
inline double epsilon_bound(double cH, double C, double safety = 0.5,
                            double horizon = std::numeric_limits<double>::infinity()) {
  if (!(cH > 0.0) || !(C >= 0.0)) throw PreconditionError("epsilon bound needs cH > 0 and C >= 0");
  if (!(safety > 0.0) || safety > 1.0) throw PreconditionError("safety must lie in (0, 1]");
  if (C == 0.0) return horizon;
  return std::min(safety / (2.0 * cH * C), horizon);
}

}  // namespace hjsbv
