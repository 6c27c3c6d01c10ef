#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "hjsbv/hamiltonian.hpp"

namespace hjsbv {

inline constexpr double kOracleInf = std::numeric_limits<double>::infinity();

/// Continuous piecewise-affine function on the line.
/// slopes[0] applies on (-inf, b0], slopes[i] on [b(i-1), b(i)], slopes[m] on
/// [b(m-1), inf). anchor is the value at b0 (at 0 when there are no breakpoints).
struct PwaData {
  std::vector<double> breakpoints;
  std::vector<double> slopes;
  double anchor = 0.0;

  void validate() const {
    if (slopes.size() != breakpoints.size() + 1) throw DomainError("PWA data needs one more slope than breakpoints");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (!std::isfinite(breakpoints[i])) throw DomainError("PWA breakpoints must be finite");
      if (i > 0 && !(breakpoints[i] > breakpoints[i - 1])) throw DomainError("PWA breakpoints must increase");
    }
    for (double s : slopes)
      if (!std::isfinite(s)) throw DomainError("PWA slopes must be finite");
    if (!std::isfinite(anchor)) throw DomainError("PWA anchor must be finite");
  }

  std::size_t pieces() const { return slopes.size(); }

  double lipschitz() const {
    double c = 0.0;
    for (double s : slopes) c = std::max(c, std::abs(s));
    return c;
  }

  /// Piece i spans [lo, hi] (infinite at the ends).
  double piece_lo(std::size_t i) const {
    return i == 0 ? -std::numeric_limits<double>::infinity() : breakpoints[i - 1];
  }
  double piece_hi(std::size_t i) const {
    return i + 1 == slopes.size() ? std::numeric_limits<double>::infinity() : breakpoints[i];
  }

  /// Values at the breakpoints, computed once.
  std::vector<double> knot_values() const {
    std::vector<double> v(breakpoints.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = i == 0 ? anchor : v[i - 1] + slopes[i] * (breakpoints[i] - breakpoints[i - 1]);
    return v;
  }

  double eval(double y, const std::vector<double>& knots) const {
    if (breakpoints.empty()) return anchor + slopes[0] * y;
    if (y <= breakpoints.front()) return anchor + slopes[0] * (y - breakpoints.front());
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());  // y in piece i, i >= 1
    return knots[i - 1] + slopes[i] * (y - breakpoints[i - 1]);
  }

  double eval(double y) const { return eval(y, knot_values()); }

  /// Callable with the knot values precomputed.
  std::function<double(const Point&)> sampler() const {
    auto self = std::make_shared<const std::pair<PwaData, std::vector<double>>>(*this, knot_values());
    return [self](const Point& y) { return self->first.eval(y[0], self->second); };
  }
};

struct ExactSolution {
  double value = 0.0;
  std::vector<double> minimizers;
};

/// Exact minimum of y -> u0(y) + (x - y)^2 / (2 A t) for PWA u0: on each piece
/// the minimum is the clamped stationary point x - A t s.
inline ExactSolution exact_pwa_solution(const PwaData& data, double A, double t, double x) {
  data.validate();
  if (!(A > 0.0) || !(t > 0.0)) throw DomainError("exact solution needs A > 0 and t > 0");
  const auto knots = data.knot_values();
  std::vector<std::pair<double, double>> cand;  // (value, y)
  cand.reserve(data.pieces());
  for (std::size_t i = 0; i < data.pieces(); ++i) {
    const double y = std::clamp(x - A * t * data.slopes[i], data.piece_lo(i), data.piece_hi(i));
    const double u = i == 0 ? (data.breakpoints.empty() ? data.anchor + data.slopes[0] * y
                                                        : data.anchor + data.slopes[0] * (y - data.breakpoints[0]))
                            : knots[i - 1] + data.slopes[i] * (y - data.breakpoints[i - 1]);
    cand.emplace_back(u + (x - y) * (x - y) / (2.0 * A * t), y);
  }
  std::sort(cand.begin(), cand.end());
  ExactSolution out;
  out.value = cand.front().first;
  const double tol = 1e-12 * (1.0 + std::abs(out.value));
  for (const auto& [v, y] : cand) {
    if (v > out.value + tol) break;
    bool dup = false;
    for (double m : out.minimizers)
      if (std::abs(m - y) <= 1e-12 * (1.0 + std::abs(y))) dup = true;
    if (!dup) out.minimizers.push_back(y);
  }
  std::sort(out.minimizers.begin(), out.minimizers.end());
  return out;
}

/// First crossing time of the characteristics leaving a kink (width 0) or a
/// linear slope transition of the given width, for H = A p^2 / 2.
inline std::optional<double> riemann_shock_time(double left_slope, double right_slope, double A,
                                                 double width = 0.0) {
  if (!(A > 0.0) || !(width >= 0.0)) throw DomainError("shock time needs A > 0 and width >= 0");
  if (!(left_slope > right_slope)) return std::nullopt;
  return width / (A * (left_slope - right_slope));
}

/// Antiderivative of the level-k Cantor staircase on [0, 1], constant outside.
/// The derivative equals g / 2^k on the g-th removed gap and j / (2^k - 1) on
/// the j-th surviving interval, so it is nondecreasing from 0 to 1.
inline PwaData cantor_initial_data(int level) {
  if (level < 1 || level > 15) throw DomainError("Cantor level must lie in [1, 15]");
  std::int64_t unit = 1;
  for (int i = 0; i < level; ++i) unit *= 3;
  std::vector<std::int64_t> starts{0};
  std::int64_t len = unit;
  for (int l = 0; l < level; ++l) {
    len /= 3;
    std::vector<std::int64_t> next;
    next.reserve(starts.size() * 2);
    for (auto s : starts) {
      next.push_back(s);
      next.push_back(s + 2 * len);
    }
    starts.swap(next);
  }
  const std::size_t m = starts.size();  // 2^k intervals of length 1 (in units of 3^-k)
  const double scale = 1.0 / static_cast<double>(unit);
  const double denom = static_cast<double>(m - 1);
  PwaData d;
  d.slopes.push_back(0.0);
  for (std::size_t j = 0; j < m; ++j) {
    d.breakpoints.push_back(static_cast<double>(starts[j]) * scale);
    d.slopes.push_back(static_cast<double>(j) / denom);
    d.breakpoints.push_back(static_cast<double>(starts[j] + 1) * scale);
    if (j + 1 < m) d.slopes.push_back(static_cast<double>(j + 1) / static_cast<double>(m));
  }
  d.slopes.push_back(0.0);
  d.anchor = 0.0;
  d.validate();
  return d;
}

/// Level-k approximant of the Cantor function: affine on each surviving
/// interval of length 3^-k, constant on the removed gaps.
inline double cantor_staircase(double x, int level) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double value = 0.0, scale = 0.5;
  for (int l = 0; l < level; ++l) {
    x *= 3.0;
    const double digit = std::floor(x);
    x -= digit;
    if (digit == 1.0) return value + scale;
    if (digit == 2.0) value += scale;
    scale *= 0.5;
  }
  return value + 2.0 * scale * x;
}

struct BruteForceResult {
  double value = 0.0;
  double minimizer_spread = 0.0;
  Point argmin{0.0, 0.0};
};

namespace detail {

inline double golden_polish(const std::function<double(double)>& f, double a, double b, double& arg) {
  constexpr double g = 0.6180339887498949;
  double c = b - g * (b - a), d = a + g * (b - a), fc = f(c), fd = f(d);
  for (int it = 0; it < 120; ++it) {
    if (fc <= fd) {
      b = d, d = c, fd = fc, c = b - g * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd, d = a + g * (b - a), fd = f(d);
    }
  }
  arg = fc <= fd ? c : d;
  return std::min(fc, fd);
}

}  // namespace detail

/// Dense scan of y -> u0(y) + t L((x - y)/t) at spacing h / fineFactor over the
/// window |x - y| <= t max|DH|, then a local polish of every scanned local minimum.
inline BruteForceResult brute_force_hopf_lax(const std::function<double(const Point&)>& u0,
                                             const HamiltonianModel& model, double t, const Point& x, double h,
                                             int fine_factor) {
  if (fine_factor < 4) throw DomainError("fineFactor must be at least 4");
  if (!(t > 0.0) || !(h > 0.0)) throw DomainError("brute force needs t > 0 and h > 0");
  const int n = model.dim();
  const double step = h / fine_factor;
  const double radius = t * model.max_speed() + step;
  auto phi = [&](const Point& y) {
    Point q{0.0, 0.0};
    for (int a = 0; a < n; ++a) q[a] = (x[a] - y[a]) / t;
    return u0(y) + t * model.lagrangian(q);
  };
  const auto cells = static_cast<std::int64_t>(std::ceil(radius / step));
  const std::size_t w = static_cast<std::size_t>(2 * cells + 1);
  auto at = [&](std::int64_t i, std::int64_t j) {
    Point y{x[0] + step * static_cast<double>(i), n == 2 ? x[1] + step * static_cast<double>(j) : 0.0};
    return y;
  };
  std::vector<double> v(n == 1 ? w : w * w, kOracleInf);
  for (std::int64_t j = n == 2 ? -cells : 0; j <= (n == 2 ? cells : 0); ++j)
    for (std::int64_t i = -cells; i <= cells; ++i) {
      const double r = step * std::sqrt(static_cast<double>(i * i + j * j));
      if (r > radius) continue;
      v[static_cast<std::size_t>(i + cells) + (n == 2 ? w * static_cast<std::size_t>(j + cells) : 0)] = phi(at(i, j));
    }
  const double m = *std::min_element(v.begin(), v.end());
  std::vector<std::pair<double, Point>> polished;
  auto val = [&](std::int64_t i, std::int64_t j) {
    if (i < -cells || i > cells || j < -cells || j > cells) return kOracleInf;
    return v[static_cast<std::size_t>(i + cells) + (n == 2 ? w * static_cast<std::size_t>(j + cells) : 0)];
  };
  const double band = 2.0 * (model.gradient_norm_bound() + 4.0) * step + 1e-12 * (1.0 + std::abs(m));
  for (std::int64_t j = n == 2 ? -cells : 0; j <= (n == 2 ? cells : 0); ++j)
    for (std::int64_t i = -cells; i <= cells; ++i) {
      const double c = val(i, j);
      if (!(c <= m + band)) continue;
      bool local = true;
      for (std::int64_t dj = n == 2 ? -1 : 0; dj <= (n == 2 ? 1 : 0); ++dj)
        for (std::int64_t di = -1; di <= 1; ++di)
          if ((di || dj) && val(i + di, j + dj) < c) local = false;
      if (!local) continue;
      Point y = at(i, j);
      double best = c;
      for (int sweep = 0; sweep < (n == 1 ? 1 : 8); ++sweep)
        for (int a = 0; a < n; ++a) {
          double arg = y[a];
          const double wdt = step / static_cast<double>(1 << std::min(sweep, 6));
          const double pv = detail::golden_polish(
              [&](double s) {
                Point p = y;
                p[a] = s;
                return phi(p);
              },
              y[a] - wdt, y[a] + wdt, arg);
          if (pv < best) {
            best = pv;
            y[a] = arg;
          }
        }
      polished.emplace_back(best, y);
    }
  std::sort(polished.begin(), polished.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  BruteForceResult r;
  r.value = polished.front().first;
  r.argmin = polished.front().second;
  for (const auto& [pv, y] : polished)
    if (pv <= r.value + 1e-9 * (1.0 + std::abs(r.value)))
      r.minimizer_spread = std::max(r.minimizer_spread, dist(y, r.argmin, n));
  return r;
}

}  // namespace hjsbv
