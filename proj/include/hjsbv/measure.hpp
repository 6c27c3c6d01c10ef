#pragma once

#include <algorithm>
#include <vector>

#include "hjsbv/core.hpp"

namespace hjsbv {

/// Lebesgue measure of a finite union of intervals [lower[0], upper[0]].
inline double union_length(std::vector<Box> boxes) {
  std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) { return a.lower[0] < b.lower[0]; });
  double total = 0.0, lo = 0.0, hi = 0.0;
  bool open = false;
  for (const auto& b : boxes) {
    if (!open) {
      lo = b.lower[0], hi = b.upper[0], open = true;
    } else if (b.lower[0] > hi) {
      total += hi - lo;
      lo = b.lower[0], hi = b.upper[0];
    } else {
      hi = std::max(hi, b.upper[0]);
    }
  }
  if (open) total += hi - lo;
  return total;
}

namespace detail {

// Segment tree over compressed y coordinates holding the covered length.
class CoverTree {
 public:
  explicit CoverTree(std::vector<double> ys) : ys_(std::move(ys)), cnt_(4 * ys_.size(), 0), len_(4 * ys_.size(), 0.0) {}

  void add(std::size_t l, std::size_t r, int v) {
    if (l < r) update(1, 0, ys_.size() - 1, l, r, v);
  }
  double covered() const { return len_.empty() ? 0.0 : len_[1]; }

 private:
  void update(std::size_t node, std::size_t lo, std::size_t hi, std::size_t l, std::size_t r, int v) {
    if (r <= lo || hi <= l) return;
    if (l <= lo && hi <= r) {
      cnt_[node] += v;
    } else {
      const std::size_t mid = (lo + hi) / 2;
      update(2 * node, lo, mid, l, r, v);
      update(2 * node + 1, mid, hi, l, r, v);
    }
    if (cnt_[node] > 0)
      len_[node] = ys_[hi] - ys_[lo];
    else if (hi - lo == 1)
      len_[node] = 0.0;
    else
      len_[node] = len_[2 * node] + len_[2 * node + 1];
  }

  std::vector<double> ys_;
  std::vector<int> cnt_;
  std::vector<double> len_;
};

}  // namespace detail

/// Area of a finite union of axis-aligned rectangles (sweep line).
inline double union_area(const std::vector<Box>& boxes) {
  std::vector<double> ys;
  ys.reserve(2 * boxes.size());
  for (const auto& b : boxes)
    if (b.upper[0] > b.lower[0] && b.upper[1] > b.lower[1]) {
      ys.push_back(b.lower[1]);
      ys.push_back(b.upper[1]);
    }
  if (ys.empty()) return 0.0;
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (ys.size() < 2) return 0.0;
  struct Event {
    double x;
    int v;
    std::size_t l, r;
  };
  std::vector<Event> ev;
  ev.reserve(2 * boxes.size());
  auto pos = [&](double y) { return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin()); };
  for (const auto& b : boxes) {
    if (!(b.upper[0] > b.lower[0] && b.upper[1] > b.lower[1])) continue;
    const std::size_t l = pos(b.lower[1]), r = pos(b.upper[1]);
    ev.push_back({b.lower[0], +1, l, r});
    ev.push_back({b.upper[0], -1, l, r});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });
  detail::CoverTree tree(ys);
  double area = 0.0, prev = ev.front().x;
  for (const auto& e : ev) {
    area += tree.covered() * (e.x - prev);
    tree.add(e.l, e.r, e.v);
    prev = e.x;
  }
  return area;
}

inline double union_volume(const std::vector<Box>& boxes, int dim) {
  return dim == 1 ? union_length(boxes) : union_area(boxes);
}

}  // namespace hjsbv
