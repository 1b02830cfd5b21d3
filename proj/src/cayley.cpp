#include "deadend/cayley.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <ostream>

#include <omp.h>

namespace deadend {

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
 public:
  explicit Deadline(std::chrono::milliseconds limit) : end_(Clock::now() + limit) {}
  bool passed() const { return Clock::now() > end_; }

 private:
  Clock::time_point end_;
};

}  // namespace

void Budget::validate() const {
  if (max_elements == 0 || max_radius == 0 || max_time.count() <= 0) throw ParseError("budgets must be positive");
}

class BallBuilder {
 public:
  BallBuilder(const GeneratingSet& gens, std::uint32_t radius, const Budget& budget)
      : ball_(gens), budget_(budget), deadline_(budget.max_time) {
    budget.validate();
    if (radius > budget.max_radius) {
      throw BudgetExceeded("radius " + std::to_string(radius) + " exceeds the radius budget", 0);
    }
    ball_.radius_ = radius;
    insert(gens.group().identity(), 0, {Ball::kNoParent, 0});
  }

  Ball serial() {
    const auto& gens = ball_.gens_;
    const auto& group = gens.group();
    const std::size_t slots = gens.slot_count();
    for (std::size_t head = 0; head < ball_.elements_.size(); ++head) {
      const std::uint32_t d = ball_.distance_[head];
      if (d >= ball_.radius_) break;
      if ((head & 0xfff) == 0 && deadline_.passed()) throw BudgetExceeded("ball: time budget exhausted", d == 0 ? 0 : d - 1);
      for (std::size_t s = 0; s < slots; ++s) {
        // Copy: insert() may reallocate elements_.
        Element y = group.multiply(ball_.elements_[head], gens.slot(s));
        if (!ball_.index_.contains(y)) insert(std::move(y), d + 1, {static_cast<std::uint32_t>(head), static_cast<std::uint32_t>(s)});
      }
    }
    return finish();
  }

  Ball parallel() {
    const auto& gens = ball_.gens_;
    const auto& group = gens.group();
    const std::size_t slots = gens.slot_count();
    std::size_t begin = 0;
    for (std::uint32_t level = 0; level < ball_.radius_; ++level) {
      const std::size_t end = ball_.elements_.size();
      if (begin == end) break;
      if (deadline_.passed()) throw BudgetExceeded("ball: time budget exhausted", level == 0 ? 0 : level - 1);

      const auto total = static_cast<std::int64_t>((end - begin) * slots);
      std::vector<Element> candidates(static_cast<std::size_t>(total));
      std::vector<unsigned char> fresh(static_cast<std::size_t>(total), 0);
      std::exception_ptr failure;
      std::mutex failure_mutex;

#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < total; ++i) {
        try {
          const auto u = static_cast<std::size_t>(i);
          candidates[u] = group.multiply(ball_.elements_[begin + u / slots], gens.slot(u % slots));
          fresh[u] = ball_.index_.contains(candidates[u]) ? 0 : 1;
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);

      for (std::size_t u = 0; u < candidates.size(); ++u) {
        if (!fresh[u] || ball_.index_.contains(candidates[u])) continue;
        insert(std::move(candidates[u]), level + 1,
               {static_cast<std::uint32_t>(begin + u / slots), static_cast<std::uint32_t>(u % slots)});
      }
      begin = end;
    }
    return finish();
  }

 private:
  void insert(Element x, std::uint32_t d, Ball::Parent p) {
    if (ball_.elements_.size() >= budget_.max_elements) {
      throw BudgetExceeded("ball: element budget of " + std::to_string(budget_.max_elements) + " exhausted",
                           d == 0 ? 0 : d - 1);
    }
    ball_.index_.emplace(x, static_cast<std::uint32_t>(ball_.elements_.size()));
    ball_.elements_.push_back(std::move(x));
    ball_.distance_.push_back(d);
    ball_.parent_.push_back(p);
  }

  Ball finish() {
    const std::uint32_t top = ball_.distance_.empty() ? 0 : ball_.distance_.back();
    ball_.sphere_sizes_.assign(top + 1, 0);
    for (auto d : ball_.distance_) ++ball_.sphere_sizes_[d];
    ball_.saturated_ = top < ball_.radius_;
    return std::move(ball_);
  }

  Ball ball_;
  Budget budget_;
  Deadline deadline_;
};

Ball build_ball(const GeneratingSet& gens, std::uint32_t radius, const Budget& budget) {
  return BallBuilder(gens, radius, budget).parallel();
}

Ball build_ball_serial(const GeneratingSet& gens, std::uint32_t radius, const Budget& budget) {
  return BallBuilder(gens, radius, budget).serial();
}

Ball restore_ball(GeneratingSet gens, std::uint32_t radius, std::vector<Element> elements,
                  std::vector<std::uint32_t> distance, std::vector<Ball::Parent> parent, bool saturated) {
  const std::size_t n = elements.size();
  if (n == 0 || distance.size() != n || parent.size() != n) throw ParseError("inconsistent ball tables");
  Ball b(std::move(gens));
  b.radius_ = radius;
  b.saturated_ = saturated;
  const auto& group = b.gens_.group();
  if (!group.is_identity(elements[0]) || distance[0] != 0) throw ParseError("ball must start at the identity");
  for (std::size_t i = 1; i < n; ++i) {
    const auto p = parent[i];
    if (p.index >= i || p.slot >= b.gens_.slot_count() || distance[i] != distance[p.index] + 1 || distance[i] > radius) {
      throw ParseError("ball parent link " + std::to_string(i) + " is inconsistent");
    }
    if (group.multiply(elements[p.index], b.gens_.slot(p.slot)) != elements[i]) {
      throw ParseError("ball parent link " + std::to_string(i) + " does not multiply out");
    }
  }
  b.elements_ = std::move(elements);
  b.distance_ = std::move(distance);
  b.parent_ = std::move(parent);
  b.sphere_sizes_.assign(b.distance_.back() + 1, 0);
  for (auto d : b.distance_) ++b.sphere_sizes_[d];
  b.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!b.index_.emplace(b.elements_[i], static_cast<std::uint32_t>(i)).second) throw ParseError("duplicate ball element");
  }
  return b;
}

std::optional<std::size_t> Ball::index_of(const Element& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Ball::norm(const Element& x) const {
  auto i = index_of(x);
  if (!i) return std::nullopt;
  return distance_[*i];
}

Word Ball::geodesic_at(std::size_t index) const {
  Word w;
  w.reserve(distance_[index]);
  for (std::size_t i = index; parent_[i].index != kNoParent; i = parent_[i].index) {
    w.push_back(Letter::from_slot(parent_[i].slot));
  }
  std::reverse(w.begin(), w.end());
  return w;
}

Word Ball::geodesic(const Element& x) const {
  auto i = index_of(x);
  if (!i) throw Error("geodesic: element " + group().format(x) + " is not in the ball");
  return geodesic_at(*i);
}

bool operator==(const Ball& a, const Ball& b) {
  if (!(a.gens_ == b.gens_) || a.radius_ != b.radius_ || a.saturated_ != b.saturated_) return false;
  if (a.elements_ != b.elements_ || a.distance_ != b.distance_) return false;
  for (std::size_t i = 0; i < a.parent_.size(); ++i) {
    if (a.parent_[i].index != b.parent_[i].index || a.parent_[i].slot != b.parent_[i].slot) return false;
  }
  return true;
}

void write_norm_csv(std::ostream& out, const Ball& ball) {
  out << "element,norm\n";
  for (std::size_t i = 0; i < ball.size(); ++i) {
    auto s = ball.group().format(ball.element(i));
    if (s.find(',') != std::string::npos) s = '"' + s + '"';
    out << s << ',' << ball.distance(i) << '\n';
  }
}

}  // namespace deadend
