#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hjsbv/regularity.hpp"

namespace hjsbv {

struct Atom {
  double location = 0.0;
  double height = 0.0;
};

/// Split of the variation of a sampled 1-d derivative into absolutely
/// continuous, jump and mesoscale (Cantor proxy) parts.
struct MeasureBreakdown {
  int slice_axis = 0;
  double slice_offset = 0.0;
  double total_mass = 0.0;
  double ac_mass = 0.0;
  double jump_mass = 0.0;
  double cantor_proxy = 0.0;
  std::vector<Atom> atoms;
  double ac_ceiling = 0.0;
  double atom_tol = 0.0;
};

struct BvOptions {
  // density bound K of the absolutely continuous part; NaN selects
  // 4 x (median |dg| / h)
  double density_bound = std::numeric_limits<double>::quiet_NaN();
  // lower floor of the atom threshold; NaN selects 1% of the total mass
  double atom_floor = std::numeric_limits<double>::quiet_NaN();
  // a run of at least this many same-sign increments above the ac band whose
  // neighbours differ by under 25% is resolved density, counted as ac; 0 disables
  std::size_t smooth_run = 16;
};

/// Increments |g(i+1) - g(i)| above atom_tol are atoms, those below
/// density_bound * h are absolutely continuous, the rest is the Cantor proxy.
inline MeasureBreakdown bv_decompose(const std::vector<double>& g, double h, double x0 = 0.0, BvOptions opt = {}) {
  if (g.size() < 8) throw DomainError("BV decomposition needs at least 8 samples");
  if (!(h > 0.0)) throw DomainError("sample spacing must be positive");
  for (double v : g)
    if (!std::isfinite(v)) throw DomainError("derivative samples must be finite");
  MeasureBreakdown r;
  std::vector<double> inc(g.size() - 1);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    inc[i] = g[i + 1] - g[i];
    r.total_mass += std::abs(inc[i]);
  }
  std::vector<double> mags(inc.size());
  std::transform(inc.begin(), inc.end(), mags.begin(), [](double v) { return std::abs(v); });
  auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
  std::nth_element(mags.begin(), mid, mags.end());
  const double median_density = *mid / h;
  const double K = std::isnan(opt.density_bound) ? 4.0 * median_density : opt.density_bound;
  const double floor = std::isnan(opt.atom_floor) ? 0.01 * r.total_mass : opt.atom_floor;
  r.ac_ceiling = K * h;
  r.atom_tol = std::max({10.0 * h * median_density, floor, r.ac_ceiling});
  enum Band { Ac, Mid, Jump };
  std::vector<Band> band(inc.size());
  for (std::size_t i = 0; i < inc.size(); ++i) {
    const double a = std::abs(inc[i]);
    band[i] = a > r.atom_tol ? Jump : (a <= r.ac_ceiling ? Ac : Mid);
  }
  if (opt.smooth_run > 0) {
    auto close = [&](std::size_t i, std::size_t j) {
      return band[j] != Ac && inc[i] * inc[j] > 0 && std::abs(inc[j] - inc[i]) < 0.25 * std::abs(inc[i]);
    };
    for (std::size_t i = 0; i < inc.size();) {
      if (band[i] == Ac) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < inc.size() && close(j - 1, j)) ++j;
      if (j - i >= opt.smooth_run) std::fill(band.begin() + static_cast<std::ptrdiff_t>(i),
                                             band.begin() + static_cast<std::ptrdiff_t>(j), Ac);
      i = j;
    }
  }
  for (std::size_t i = 0; i < inc.size(); ++i) {
    const double a = std::abs(inc[i]);
    if (band[i] == Jump) {
      r.jump_mass += a;
      r.atoms.push_back({x0 + (static_cast<double>(i) + 0.5) * h, inc[i]});
    } else if (band[i] == Ac) {
      r.ac_mass += a;
    } else {
      r.cantor_proxy += a;
    }
  }
  return r;
}

/// Which line of a slice to decompose: the row through `offset` along `axis`.
struct SliceSpec {
  int axis = 0;
  double offset = 0.0;
};

/// Derivative samples (forward differences at cell midpoints) of the
/// finite part of the slice line; also returns the first midpoint.
inline std::pair<std::vector<double>, double> slice_derivative(const GridField& f, const SliceSpec& spec) {
  const GridDomain& d = f.domain;
  if (spec.axis < 0 || spec.axis >= d.dim) throw DomainError("slice axis out of range");
  std::size_t fixed = 0;
  const int other = 1 - spec.axis;
  if (d.dim == 2) {
    const double s = std::round((spec.offset - d.lower[other]) / d.h[other]);
    if (s < 0 || s > static_cast<double>(d.count[other] - 1)) throw DomainError("slice offset outside the grid");
    fixed = static_cast<std::size_t>(s);
  }
  std::vector<double> g;
  double x0 = 0.0;
  const std::size_t len = d.count[spec.axis];
  auto at = [&](std::size_t i) {
    return spec.axis == 0 ? d.index(i, fixed) : d.index(fixed, i);
  };
  for (std::size_t i = 0; i + 1 < len; ++i) {
    const std::size_t a = at(i), b = at(i + 1);
    if (!f.finite(a) || !f.finite(b)) continue;
    if (g.empty()) x0 = d.node(a)[spec.axis] + 0.5 * d.h[spec.axis];
    g.push_back((f.values[b] - f.values[a]) / d.h[spec.axis]);
  }
  return {g, x0};
}

struct ScanEntry {
  double time = 0.0;
  MeasureBreakdown breakdown;
  bool flagged = false;
};

struct ExceptionalScan {
  std::vector<ScanEntry> entries;
  std::vector<double> flagged_times;
  std::vector<double> unmatched_times;  // flagged but not near an F drop
  FTrace trace;
  bool consistent = true;
};

/// BV decomposition of Du(t, .) along a slice line at each time, with the
/// density bound 2 cH / t from semiconcavity; times whose Cantor proxy exceeds
/// 5% of the variation are cross-referenced with the drops of F.
inline ExceptionalScan exceptional_time_scan(const HopfLaxSolution& sol, const std::vector<double>& times,
                                             SliceSpec spec = {}) {
  ExceptionalScan out;
  out.trace = f_trace(sol, times);
  const double cH = sol.model().cH();
  const double h = sol.domain().h[spec.axis];
  for (double t : times) {
    auto [g, x0] = slice_derivative(sol.solve_slice(t), spec);
    BvOptions opt;
    opt.density_bound = 2.0 * cH / t;
    opt.atom_floor = 4.0 * cH * h / t;
    ScanEntry e;
    e.time = t;
    e.breakdown = bv_decompose(g, h, x0, opt);
    e.breakdown.slice_axis = spec.axis;
    e.breakdown.slice_offset = spec.offset;
    e.flagged = e.breakdown.total_mass > 0.0 && e.breakdown.cantor_proxy > 0.05 * e.breakdown.total_mass;
    if (e.flagged) out.flagged_times.push_back(t);
    out.entries.push_back(std::move(e));
  }
  double step = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) step = std::max(step, times[k] - times[k - 1]);
  for (double t : out.flagged_times) {
    bool near = false;
    for (const auto& dsc : out.trace.discontinuities) {
      const double a = times[dsc.index], b = times[dsc.index + 1];
      const double gap = t < a ? a - t : (t > b ? t - b : 0.0);
      if (gap <= step * (1.0 + 1e-9)) near = true;
    }
    if (!near) out.unmatched_times.push_back(t);
  }
  out.consistent = out.unmatched_times.empty();
  return out;
}

}  // namespace hjsbv
