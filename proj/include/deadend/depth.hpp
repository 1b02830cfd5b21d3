#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "deadend/cayley.hpp"

namespace deadend {

/// Dead-end depth of one element.
///
/// Finite(k): some element at distance k from g has larger norm, none closer.
/// AtLeast(c): the search stopped at its cap c without leaving the ball of
///   radius norm(g), so the depth is at least c (in fact larger).
/// Infinite: nothing in the group has larger norm than g.
struct DepthValue {
  enum class Kind : std::uint8_t { Finite, AtLeast, Infinite };

  Kind kind = Kind::Finite;
  std::uint32_t value = 0;

  static DepthValue finite(std::uint32_t k) { return {Kind::Finite, k}; }
  static DepthValue at_least(std::uint32_t k) { return {Kind::AtLeast, k}; }
  static DepthValue infinite() { return {Kind::Infinite, 0}; }

  bool is_finite() const noexcept { return kind == Kind::Finite; }
  /// "3", ">=5", "inf".
  std::string to_string() const;

  friend bool operator==(const DepthValue&, const DepthValue&) = default;
};

/// Depth of `g` by BFS outward from g inside the closed ball of radius
/// norm(g). Any element absent from `ball` has norm > ball.radius() >=
/// norm(g), so it counts as an exit. Throws Error if g is not in the ball.
DepthValue depth(const Ball& ball, const Element& g, std::uint32_t cap);
DepthValue depth_at(const Ball& ball, std::size_t index, std::uint32_t cap);

struct NormSummary {
  std::uint32_t norm = 0;
  std::uint64_t elements = 0;
  std::optional<std::uint32_t> max_finite;
  std::uint64_t at_least = 0;
  std::uint64_t infinite = 0;
};

struct DepthProfile {
  std::uint32_t radius = 0;
  std::uint32_t cap = 0;
  std::vector<Element> elements;
  std::vector<std::uint32_t> norms;
  std::vector<DepthValue> depths;
  std::vector<NormSummary> per_norm;
  std::optional<std::uint32_t> max_finite;
  std::uint64_t infinite_count = 0;
  std::uint64_t at_least_count = 0;

  std::optional<DepthValue> lookup(const Element& x) const;
};

/// Depth of every element of the ball, in ball order; elements are
/// processed in parallel.
DepthProfile depth_profile(const Ball& ball, std::uint32_t cap);
DepthProfile depth_profile_serial(const Ball& ball, std::uint32_t cap);

inline constexpr std::uint64_t kOracleMaxOrder = 10'000;

/// Ground truth for finite groups: BFS from every element of the subgroup
/// generated by `gens`, then depth(g) = min{ d(g, x) : norm(x) > norm(g) }.
/// Uses dense element ids only; shares no code with Ball or depth().
/// Throws Error for infinite groups or order above kOracleMaxOrder.
DepthProfile depth_oracle(const GeneratingSet& gens);

/// Element-by-element comparison; returns a description of the first
/// mismatch, or nullopt when both profiles cover the same elements with the
/// same norms and depths.
std::optional<std::string> compare_profiles(const Group& group, const DepthProfile& a, const DepthProfile& b);

/// "element,norm,depth" rows.
void write_depth_csv(std::ostream& out, const Group& group, const DepthProfile& profile);

}  // namespace deadend
