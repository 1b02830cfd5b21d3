#pragma once

// Test-side ground truth. Nothing here touches Ball, depth() or the
// construction code; each oracle works on plain integers or tuples.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <vector>

namespace oracle {

/// Norms in Z with respect to a symmetric set of integer steps, for all
/// |x| <= span, by BFS restricted to [-span - pad, span + pad]. A path that
/// leaves the window is never shorter when pad exceeds the largest step
/// times the expected path length, which callers ensure.
inline std::map<std::int64_t, std::uint32_t> integer_norms(const std::vector<std::int64_t>& steps, std::int64_t window) {
  std::map<std::int64_t, std::uint32_t> dist{{0, 0}};
  std::deque<std::int64_t> queue{0};
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (auto s : steps) {
      for (auto y : {x + s, x - s}) {
        if (y < -window || y > window || dist.contains(y)) continue;
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

/// Lamplighter element: lit lamps and cursor.
struct Lamp {
  std::set<std::int64_t> lamps;
  std::int64_t cursor = 0;
  auto operator<=>(const Lamp&) const = default;
};

/// Right multiplication by t^{+-1} moves the cursor; by a toggles the lamp
/// under the cursor.
inline std::vector<Lamp> lamplighter_neighbours(const Lamp& x) {
  Lamp left = x, right = x, toggled = x;
  --left.cursor;
  ++right.cursor;
  if (!toggled.lamps.erase(x.cursor)) toggled.lamps.insert(x.cursor);
  return {right, left, toggled};
}

struct LampDepths {
  std::map<Lamp, std::uint32_t> norm;
  std::map<Lamp, std::uint32_t> depth;  // finite depths only
  std::uint32_t max_finite = 0;
};

/// Norms of the ball of radius R + 1 by BFS, then for every g with
/// |g| <= R the distance to the nearest element of larger norm, searched
/// inside the ball of radius |g| (every path out of it crosses the sphere
/// |g| + 1, which is present).
inline LampDepths lamplighter_depths(std::uint32_t R) {
  LampDepths out;
  std::deque<Lamp> queue{Lamp{}};
  out.norm[Lamp{}] = 0;
  while (!queue.empty()) {
    Lamp x = queue.front();
    queue.pop_front();
    const auto d = out.norm[x];
    if (d == R + 1) continue;
    for (auto& y : lamplighter_neighbours(x)) {
      if (out.norm.contains(y)) continue;
      out.norm[y] = d + 1;
      queue.push_back(y);
    }
  }
  for (const auto& [g, r] : out.norm) {
    if (r > R) continue;
    std::map<Lamp, std::uint32_t> seen{{g, 0}};
    std::deque<Lamp> q{g};
    std::uint32_t found = 0;
    while (!q.empty() && found == 0) {
      Lamp x = q.front();
      q.pop_front();
      for (auto& y : lamplighter_neighbours(x)) {
        if (out.norm.at(y) > r) {
          found = seen[x] + 1;
          break;
        }
        if (seen.contains(y)) continue;
        seen[y] = seen[x] + 1;
        q.push_back(y);
      }
    }
    out.depth[g] = found;
    out.max_finite = std::max(out.max_finite, found);
  }
  return out;
}

}  // namespace oracle
