#include "deadend/depth.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <unordered_set>

#include <omp.h>

namespace deadend {

std::string DepthValue::to_string() const {
  switch (kind) {
    case Kind::Finite: return std::to_string(value);
    case Kind::AtLeast: return ">=" + std::to_string(value);
    case Kind::Infinite: return "inf";
  }
  return "?";
}

DepthValue depth_at(const Ball& ball, std::size_t index, std::uint32_t cap) {
  const auto& group = ball.group();
  const auto& gens = ball.gens();
  const std::uint32_t r = ball.distance(index);

  std::unordered_set<Element, ElementHash> seen{ball.element(index)};
  std::vector<Element> frontier{ball.element(index)};
  std::vector<Element> next;
  for (std::uint32_t dist = 1; dist <= cap; ++dist) {
    next.clear();
    for (const auto& x : frontier) {
      for (std::size_t s = 0; s < gens.slot_count(); ++s) {
        Element y = group.multiply(x, gens.slot(s));
        auto n = ball.norm(y);
        if (!n || *n > r) return DepthValue::finite(dist);
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    }
    if (next.empty()) return DepthValue::infinite();
    frontier.swap(next);
  }
  return DepthValue::at_least(cap);
}

DepthValue depth(const Ball& ball, const Element& g, std::uint32_t cap) {
  auto i = ball.index_of(g);
  if (!i) throw Error("depth: element " + ball.group().format(g) + " is outside the ball; enlarge the radius");
  return depth_at(ball, *i, cap);
}

namespace {

void summarize(DepthProfile& p) {
  std::uint32_t top = 0;
  for (auto n : p.norms) top = std::max(top, n);
  p.per_norm.assign(p.norms.empty() ? 0 : top + 1, {});
  for (std::uint32_t n = 0; n < p.per_norm.size(); ++n) p.per_norm[n].norm = n;
  for (std::size_t i = 0; i < p.depths.size(); ++i) {
    auto& s = p.per_norm[p.norms[i]];
    const auto& d = p.depths[i];
    ++s.elements;
    switch (d.kind) {
      case DepthValue::Kind::Finite:
        s.max_finite = std::max(s.max_finite.value_or(0), d.value);
        p.max_finite = std::max(p.max_finite.value_or(0), d.value);
        break;
      case DepthValue::Kind::AtLeast:
        ++s.at_least;
        ++p.at_least_count;
        break;
      case DepthValue::Kind::Infinite:
        ++s.infinite;
        ++p.infinite_count;
        break;
    }
  }
}

DepthProfile profile_shell(const Ball& ball, std::uint32_t cap) {
  DepthProfile p;
  p.radius = ball.radius();
  p.cap = cap;
  p.elements = ball.elements();
  p.norms.resize(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) p.norms[i] = ball.distance(i);
  p.depths.resize(ball.size());
  return p;
}

}  // namespace

DepthProfile depth_profile(const Ball& ball, std::uint32_t cap) {
  DepthProfile p = profile_shell(ball, cap);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<std::int64_t>(ball.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      p.depths[static_cast<std::size_t>(i)] = depth_at(ball, static_cast<std::size_t>(i), cap);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  summarize(p);
  return p;
}

DepthProfile depth_profile_serial(const Ball& ball, std::uint32_t cap) {
  DepthProfile p = profile_shell(ball, cap);
  for (std::size_t i = 0; i < ball.size(); ++i) p.depths[i] = depth_at(ball, i, cap);
  summarize(p);
  return p;
}

DepthProfile depth_oracle(const GeneratingSet& gens) {
  const Group& group = gens.group();
  const auto order = group.order();
  if (!order) throw Error("depth oracle needs a finite group");
  if (*order > kOracleMaxOrder) throw Error("depth oracle is limited to order " + std::to_string(kOracleMaxOrder));
  const std::size_t m = *order;

  std::vector<std::uint64_t> gen_ids;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    gen_ids.push_back(group.id_of(gens[i]));
    gen_ids.push_back(group.id_of(group.invert(gens[i])));
  }
  // neighbours[x * k + j] = x * gen_j
  const std::size_t k = gen_ids.size();
  std::vector<std::uint32_t> neighbours(m * k);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t j = 0; j < k; ++j) neighbours[x * k + j] = static_cast<std::uint32_t>(group.multiply_ids(x, gen_ids[j]));

  constexpr std::uint32_t kUnseen = 0xffffffffu;
  auto bfs = [&](std::size_t source, std::vector<std::uint32_t>& dist, std::vector<std::uint32_t>& queue) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    queue.clear();
    dist[source] = 0;
    queue.push_back(static_cast<std::uint32_t>(source));
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const auto x = queue[h];
      for (std::size_t j = 0; j < k; ++j) {
        const auto y = neighbours[x * k + j];
        if (dist[y] == kUnseen) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
      }
    }
  };

  const std::size_t identity = group.id_of(group.identity());
  std::vector<std::uint32_t> norm(m), members;
  bfs(identity, norm, members);
  std::sort(members.begin(), members.end());

  std::vector<DepthValue> depth_of(members.size());
#pragma omp parallel
  {
    std::vector<std::uint32_t> dist(m), queue;
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(members.size()); ++idx) {
      const auto g = members[static_cast<std::size_t>(idx)];
      bfs(g, dist, queue);
      std::uint32_t best = kUnseen;
      for (auto x : members) {
        if (norm[x] > norm[g]) best = std::min(best, dist[x]);
      }
      depth_of[static_cast<std::size_t>(idx)] = best == kUnseen ? DepthValue::infinite() : DepthValue::finite(best);
    }
  }

  DepthProfile p;
  p.cap = kUnseen;
  for (std::size_t idx = 0; idx < members.size(); ++idx) {
    p.elements.push_back(group.from_id(members[idx]));
    p.norms.push_back(norm[members[idx]]);
    p.depths.push_back(depth_of[idx]);
    p.radius = std::max(p.radius, norm[members[idx]]);
  }
  summarize(p);
  return p;
}

std::optional<DepthValue> DepthProfile::lookup(const Element& x) const {
  auto it = std::find(elements.begin(), elements.end(), x);
  if (it == elements.end()) return std::nullopt;
  return depths[static_cast<std::size_t>(it - elements.begin())];
}

std::optional<std::string> compare_profiles(const Group& group, const DepthProfile& a, const DepthProfile& b) {
  if (a.elements.size() != b.elements.size()) {
    return "profiles cover " + std::to_string(a.elements.size()) + " vs " + std::to_string(b.elements.size()) + " elements";
  }
  std::map<Element, std::size_t> index_b;
  for (std::size_t i = 0; i < b.elements.size(); ++i) index_b.emplace(b.elements[i], i);
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    auto it = index_b.find(a.elements[i]);
    const auto name = group.format(a.elements[i]);
    if (it == index_b.end()) return "element " + name + " missing from second profile";
    if (a.norms[i] != b.norms[it->second]) return "norm mismatch at " + name;
    if (!(a.depths[i] == b.depths[it->second])) {
      return "depth mismatch at " + name + ": " + a.depths[i].to_string() + " vs " + b.depths[it->second].to_string();
    }
  }
  return std::nullopt;
}

void write_depth_csv(std::ostream& out, const Group& group, const DepthProfile& profile) {
  out << "element,norm,depth\n";
  for (std::size_t i = 0; i < profile.elements.size(); ++i) {
    auto s = group.format(profile.elements[i]);
    if (s.find(',') != std::string::npos) s = '"' + s + '"';
    out << s << ',' << profile.norms[i] << ',' << profile.depths[i].to_string() << '\n';
  }
}

}  // namespace deadend
