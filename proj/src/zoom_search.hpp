#pragma once

// Box-constrained maximization by a full grid followed by repeated zooming:
// each step lays a refine_n^N grid over +/- one cell around the incumbent.
// The cell shrinks only when the incumbent ends up strictly inside that grid;
// otherwise the grid is recentred at the same size, so the search can walk
// along a tilted constraint boundary.
// A final polishing phase polls random and coordinate directions with a step
// that doubles on success and halves on failure, which escapes the cusps
// where a fixed lattice stalls.
// Scores of -inf mark rejected points. Among equal scores the
// lexicographically smallest point wins, so the result does not depend on
// evaluation order.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "rsc/parallel.hpp"

namespace rsc::detail {

template <std::size_t N>
struct ZoomPoint {
  std::array<double, N> x{};
  double score = -std::numeric_limits<double>::infinity();
};

template <std::size_t N>
bool better(const ZoomPoint<N>& a, const ZoomPoint<N>& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.x < b.x;
}

template <std::size_t N>
std::vector<std::array<double, N>> lattice(const std::array<double, N>& lo,
                                           const std::array<double, N>& hi, int n) {
  std::size_t total = 1;
  for (std::size_t d = 0; d < N; ++d) total *= static_cast<std::size_t>(n);
  std::vector<std::array<double, N>> pts(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    for (std::size_t d = N; d-- > 0;) {
      const int j = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
      pts[i][d] = j == n - 1 ? hi[d] : lo[d] + (hi[d] - lo[d]) * j / (n - 1);
    }
  }
  return pts;
}

template <std::size_t N, class Score>
ZoomPoint<N> best_of(const std::vector<std::array<double, N>>& pts, unsigned threads,
                     Score&& score, ZoomPoint<N> incumbent) {
  std::vector<double> s(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) { s[i] = score(pts[i]); });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ZoomPoint<N> c{pts[i], s[i]};
    if (better(c, incumbent)) incumbent = c;
  }
  return incumbent;
}

struct ZoomSettings {
  int initial_n = 41;
  int refine_n = 9;
  int iterations = 60;
  unsigned threads = 0;
};

// Deterministic unit directions: +/- each axis plus 8 N random ones.
template <std::size_t N>
std::vector<std::array<double, N>> poll_directions(std::mt19937_64& rng) {
  std::vector<std::array<double, N>> dirs;
  for (std::size_t d = 0; d < N; ++d) {
    for (double sgn : {-1.0, 1.0}) {
      std::array<double, N> e{};
      e[d] = sgn;
      dirs.push_back(e);
    }
  }
  for (std::size_t k = 0; k < 8 * N; ++k) {
    std::array<double, N> v{};
    double len = 0.0;
    for (auto& c : v) {
      c = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
      len += c * c;
    }
    len = std::sqrt(len);
    if (len == 0.0) continue;
    for (auto& c : v) c /= len;
    dirs.push_back(v);
  }
  return dirs;
}

template <std::size_t N, class Score>
ZoomPoint<N> polish(const std::array<double, N>& lo, const std::array<double, N>& hi,
                    const ZoomSettings& z, Score&& score, ZoomPoint<N> best) {
  std::mt19937_64 rng(0x5eed);
  double step = 1.0 / (z.initial_n - 1);  // fraction of each axis range
  for (int it = 0; it < 40 * z.iterations && step > 1e-15; ++it) {
    std::vector<std::array<double, N>> pts;
    for (const auto& dir : poll_directions<N>(rng)) {
      std::array<double, N> x = best.x;
      for (std::size_t d = 0; d < N; ++d)
        x[d] = std::clamp(x[d] + step * dir[d] * (hi[d] - lo[d]), lo[d], hi[d]);
      pts.push_back(x);
    }
    std::vector<double> s(pts.size());
    parallel_for(pts.size(), z.threads, [&](std::size_t i) { s[i] = score(pts[i]); });
    ZoomPoint<N> cand = best;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      ZoomPoint<N> c{pts[i], s[i]};
      if (c.score > best.score && better(c, cand)) cand = c;
    }
    if (cand.score > best.score) {
      best = cand;
      step = std::min(2.0 * step, 1.0 / (z.initial_n - 1));
    } else {
      step *= 0.5;
    }
  }
  return best;
}

template <std::size_t N, class Score>
ZoomPoint<N> zoom_search(const std::array<double, N>& lo, const std::array<double, N>& hi,
                         const ZoomSettings& z, Score&& score) {
  const auto grid = lattice(lo, hi, z.initial_n);
  std::vector<double> s(grid.size());
  parallel_for(grid.size(), z.threads, [&](std::size_t i) { s[i] = score(grid[i]); });
  ZoomPoint<N> best;
  best.x = grid.front();
  best.score = s.front();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ZoomPoint<N> c{grid[i], s[i]};
    if (better(c, best)) best = c;
  }
  if (!std::isfinite(best.score)) return best;

  std::array<double, N> cell{};
  for (std::size_t d = 0; d < N; ++d) cell[d] = (hi[d] - lo[d]) / (z.initial_n - 1);
  int shrinks = 0;
  for (int step = 0; shrinks < z.iterations && step < 20 * z.iterations; ++step) {
    bool resolvable = false;
    std::array<double, N> blo{}, bhi{};
    for (std::size_t d = 0; d < N; ++d) {
      blo[d] = std::max(lo[d], best.x[d] - cell[d]);
      bhi[d] = std::min(hi[d], best.x[d] + cell[d]);
      if (bhi[d] - blo[d] > 1e-14 * std::max(1.0, std::abs(best.x[d]))) resolvable = true;
    }
    if (!resolvable) break;
    const ZoomPoint<N> next = best_of<N>(lattice(blo, bhi, z.refine_n), z.threads, score, best);
    bool on_edge = false;
    if (next.x != best.x) {
      for (std::size_t d = 0; d < N; ++d) {
        const bool at_lo = next.x[d] == blo[d] && blo[d] > lo[d];
        const bool at_hi = next.x[d] == bhi[d] && bhi[d] < hi[d];
        on_edge = on_edge || at_lo || at_hi;
      }
    }
    best = next;
    if (on_edge) continue;
    for (std::size_t d = 0; d < N; ++d) cell[d] = 2.0 * cell[d] / (z.refine_n - 1);
    ++shrinks;
  }
  if constexpr (N == 1) {
    return best;
  } else {
    return polish<N>(lo, hi, z, score, best);
  }
}

}  // namespace rsc::detail
