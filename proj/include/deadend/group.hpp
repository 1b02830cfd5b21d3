#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "deadend/errors.hpp"

namespace deadend {

enum class GroupKind : std::uint8_t {
  IntegerLine,
  IntegerGrid,
  Cyclic,
  Dihedral,
  Lamplighter,
  Table,
};

std::string_view kind_name(GroupKind kind);

// Canonical element of one of the supported groups.
//
// The payload layout per kind:
//   IntegerLine  [x]
//   IntegerGrid  [x_1, ..., x_rank]
//   Cyclic       [r]                 0 <= r < m
//   Dihedral     [r, s]              rho^r sigma^s, 0 <= r < m, s in {0,1}
//   Lamplighter  [cursor, l_1 < l_2 < ... ]
//   Table        [id]
//
// The tag identifies the owning group. Two elements are equal iff their
// encodings are byte-identical.
class Element {
 public:
  using Payload = boost::container::small_vector<std::int64_t, 4>;

  Element() = default;
  Element(std::uint32_t tag, Payload payload) : tag_(tag), payload_(std::move(payload)) {}

  std::uint32_t tag() const noexcept { return tag_; }
  const Payload& payload() const noexcept { return payload_; }
  std::int64_t operator[](std::size_t i) const { return payload_[i]; }

  /// Little-endian tag followed by little-endian 64-bit payload words.
  std::string encoding() const;
  static Element decode(std::string_view bytes);

  friend bool operator==(const Element& a, const Element& b) noexcept {
    return a.tag_ == b.tag_ && a.payload_ == b.payload_;
  }
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept;

  std::size_t hash() const noexcept;

 private:
  std::uint32_t tag_ = 0;
  Payload payload_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept { return e.hash(); }
};

/// Explicit multiplication table over ids 0..order-1.
struct MultiplicationTable {
  std::uint32_t order = 0;
  std::uint32_t identity = 0;
  std::vector<std::uint32_t> products;  // row-major, products[a*order+b] = a*b

  std::uint32_t at(std::uint32_t a, std::uint32_t b) const { return products[std::size_t(a) * order + b]; }
};

/// Checks closure, identity, the Latin-square property and associativity.
/// Associativity is exhaustive up to order 512 and sampled above. Throws
/// ParseError describing the first violation.
void validate_table(const MultiplicationTable& table);

/// Builds the multiplication table of the permutation group generated by
/// `generators` (all of the same degree). The product x*y applies x first.
/// Element 0 is the identity; generator i becomes id `generator_ids[i]`.
/// Throws Error if the closure exceeds `max_order`.
MultiplicationTable table_from_permutations(const std::vector<std::vector<std::uint32_t>>& generators,
                                            std::size_t max_order,
                                            std::vector<std::uint32_t>* generator_ids = nullptr);

/// One group from the fixed menu. Cheap to copy; immutable.
class Group {
 public:
  static constexpr int kDefaultIntBits = 64;

  static Group integer_line(int int_bits = kDefaultIntBits);
  static Group integer_grid(std::uint32_t rank, int int_bits = kDefaultIntBits);
  static Group cyclic(std::int64_t m);
  static Group dihedral(std::int64_t m);
  static Group lamplighter(int int_bits = kDefaultIntBits);
  static Group table(MultiplicationTable table);

  /// Parses "zz", "grid:3", "cyclic:10", "dihedral:6", "lamplighter".
  /// Table groups come from JSON files and are not handled here.
  static Group parse(std::string_view spec, int int_bits = kDefaultIntBits);

  GroupKind kind() const noexcept;
  /// Modulus for Cyclic/Dihedral, rank for IntegerGrid, order for Table, 1 otherwise.
  std::int64_t parameter() const noexcept;
  int int_bits() const noexcept;
  std::uint32_t tag() const noexcept;
  const MultiplicationTable* multiplication_table() const noexcept;

  bool is_finite() const noexcept;
  /// Order of a finite group; nullopt for infinite ones.
  std::optional<std::uint64_t> order() const noexcept;

  /// Short spec string ("zz", "cyclic:10", ...). Table groups print as
  /// "table:<order>".
  std::string name() const;

  Element identity() const;
  Element multiply(const Element& x, const Element& y) const;
  Element invert(const Element& x) const;
  bool is_identity(const Element& x) const;
  /// Throws MixedGroupError if `x` is not a canonical element of this group.
  void check_member(const Element& x) const;

  // Element constructors. Cyclic and dihedral residues are reduced.
  Element integer(std::int64_t x) const;
  Element vector(std::span<const std::int64_t> coords) const;
  Element residue(std::int64_t r) const;
  Element dihedral_element(std::int64_t rotation, bool reflection) const;
  Element lamplighter_element(std::vector<std::int64_t> lamps, std::int64_t cursor) const;
  Element table_element(std::uint32_t id) const;

  // Dense ids for finite groups, 0..order-1. Identity is not necessarily 0.
  std::uint64_t id_of(const Element& x) const;
  Element from_id(std::uint64_t id) const;
  std::uint64_t multiply_ids(std::uint64_t a, std::uint64_t b) const;

  /// Element literal syntax, see README.
  std::string format(const Element& x) const;
  Element parse_element(std::string_view text) const;

  friend bool operator==(const Group& a, const Group& b) noexcept;

 private:
  struct Impl;
  explicit Group(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::int64_t add(std::int64_t a, std::int64_t b) const;
  std::int64_t negate(std::int64_t a) const;

  std::shared_ptr<const Impl> impl_;
};

/// Splits a comma separated list at top level, ignoring commas nested in
/// (), [] or {}. Whitespace around items is trimmed; empty items are errors.
std::vector<std::string> split_top_level(std::string_view text);

}  // namespace deadend
