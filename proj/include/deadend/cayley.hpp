#pragma once

#include <chrono>
#include <iosfwd>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "deadend/group.hpp"
#include "deadend/word.hpp"

namespace deadend {

struct Budget {
  std::uint64_t max_elements = 10'000'000;
  std::uint32_t max_radius = 10'000;
  std::chrono::milliseconds max_time = std::chrono::minutes(10);

  void validate() const;
};

/// Exact closed ball B_R(1) in the Cayley graph of (group, gens), stored in
/// BFS order. Element 0 is the identity. Immutable once built.
class Ball {
 public:
  struct Parent {
    std::uint32_t index;  // predecessor in BFS order
    std::uint32_t slot;   // element = predecessor * gens.slot(slot)
  };
  static constexpr std::uint32_t kNoParent = 0xffffffffu;

  const Group& group() const noexcept { return gens_.group(); }
  const GeneratingSet& gens() const noexcept { return gens_; }
  std::uint32_t radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return elements_.size(); }

  const Element& element(std::size_t i) const { return elements_[i]; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  std::uint32_t distance(std::size_t i) const { return distance_[i]; }
  Parent parent(std::size_t i) const { return parent_[i]; }
  std::span<const std::uint64_t> sphere_sizes() const noexcept { return sphere_sizes_; }

  std::optional<std::size_t> index_of(const Element& x) const;
  bool contains(const Element& x) const { return index_of(x).has_value(); }
  /// Word norm, or nullopt when x lies outside the ball (norm > radius).
  std::optional<std::uint32_t> norm(const Element& x) const;
  /// First-parent geodesic. Throws Error if x is not in the ball.
  Word geodesic(const Element& x) const;
  Word geodesic_at(std::size_t index) const;

  /// True when BFS ran out of new elements before reaching the radius,
  /// i.e. the ball is the whole (finite) group.
  bool saturated() const noexcept { return saturated_; }

  friend bool operator==(const Ball& a, const Ball& b);

 private:
  friend class BallBuilder;
  friend Ball restore_ball(GeneratingSet gens, std::uint32_t radius, std::vector<Element> elements,
                           std::vector<std::uint32_t> distance, std::vector<Parent> parent, bool saturated);

  explicit Ball(GeneratingSet gens) : gens_(std::move(gens)) {}

  GeneratingSet gens_;
  std::uint32_t radius_ = 0;
  bool saturated_ = false;
  std::vector<Element> elements_;
  std::vector<std::uint32_t> distance_;
  std::vector<Parent> parent_;
  std::vector<std::uint64_t> sphere_sizes_;
  std::unordered_map<Element, std::uint32_t, ElementHash> index_;
};

/// Level-synchronous BFS; neighbour products and membership probes of each
/// sphere are computed in parallel, insertion is ordered by (parent
/// position, slot). The result equals build_ball_serial exactly.
Ball build_ball(const GeneratingSet& gens, std::uint32_t radius, const Budget& budget = {});

/// Reference FIFO BFS: neighbours in generating-set order, generator before
/// inverse.
Ball build_ball_serial(const GeneratingSet& gens, std::uint32_t radius, const Budget& budget = {});

/// Reassembles a ball from stored BFS tables (used by the disk cache).
/// Recomputes sphere sizes and the index; checks parent links.
Ball restore_ball(GeneratingSet gens, std::uint32_t radius, std::vector<Element> elements,
                  std::vector<std::uint32_t> distance, std::vector<Ball::Parent> parent, bool saturated);

/// Writes "element,norm" rows in BFS order.
void write_norm_csv(std::ostream& out, const Ball& ball);

}  // namespace deadend
