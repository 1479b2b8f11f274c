// Shared helpers for the unit tests and the acceptance runner.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "pdas/core.hpp"
#include "pdas/generate.hpp"

namespace pdas::testing {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? m : INFINITY;
}

inline double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline std::size_t draw_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform01() * static_cast<double>(hi - lo + 1));
}

/// Weighted isotonic instance with ties and long decreasing stretches.
inline IRProblem random_ir(Rng& rng, std::size_t n, bool weighted = true) {
  Vector y(n), w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = 0.05 * static_cast<double>(i) + 3.0 * rng.normal();
    if (rng.uniform01() < 0.1) y[i] = std::round(y[i]);
    if (weighted) w[i] = rng.uniform(0.1, 5.0);
  }
  return IRProblem(y, w);
}

inline Vector uniform_data(Rng& rng, std::size_t n, double lo = 0.0, double hi = 10.0) {
  Vector y(n);
  for (auto& v : y) v = rng.uniform(lo, hi);
  return y;
}

inline SignPartition labels_from(std::initializer_list<char> codes) {
  std::vector<Label> l;
  for (char c : codes) l.push_back(c == 'P' ? Label::P : c == 'N' ? Label::N : Label::A);
  return SignPartition(l);
}

}  // namespace pdas::testing
