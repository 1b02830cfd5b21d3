#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "deadend/group.hpp"

namespace deadend {

/// One letter of a word: generator index, optionally inverted.
struct Letter {
  std::uint32_t generator = 0;
  bool inverse = false;

  /// Symmetrized slot: 2*generator for the generator, 2*generator+1 for its inverse.
  std::uint32_t slot() const noexcept { return 2 * generator + (inverse ? 1 : 0); }
  static Letter from_slot(std::uint32_t slot) noexcept { return {slot / 2, (slot & 1) != 0}; }

  /// 1-based signed form used in text and JSON: +1 is generator 0, -1 its inverse.
  std::int64_t signed_index() const noexcept { return inverse ? -std::int64_t(generator + 1) : std::int64_t(generator + 1); }
  static Letter from_signed(std::int64_t v);

  Letter inverted() const noexcept { return {generator, !inverse}; }

  friend auto operator<=>(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

Word inverse_word(const Word& w);
Word concat(const Word& a, const Word& b);
std::string format_word(const Word& w);
Word parse_word(std::string_view text);

/// Ordered list of distinct non-identity elements. Metric code always uses
/// the symmetrized view: slot 2i is entry i, slot 2i+1 its inverse.
class GeneratingSet {
 public:
  GeneratingSet(Group group, std::vector<Element> entries, std::vector<std::string> labels = {});

  /// Parses a comma separated list of element literals.
  static GeneratingSet parse(const Group& group, std::string_view text);

  const Group& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const Element& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Element>& entries() const noexcept { return entries_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  std::size_t slot_count() const noexcept { return slots_.size(); }
  const Element& slot(std::size_t s) const { return slots_[s]; }
  const Element& letter_element(Letter l) const;

  /// Product of the letters left to right; the empty word is the identity.
  Element evaluate(const Word& w) const;

  /// entries followed by those inverses that are not already listed.
  GeneratingSet symmetrized() const;

  /// Index of `x` among the entries, if present.
  std::ptrdiff_t find(const Element& x) const;

  friend bool operator==(const GeneratingSet& a, const GeneratingSet& b) {
    return a.group_ == b.group_ && a.entries_ == b.entries_;
  }

 private:
  Group group_;
  std::vector<Element> entries_;
  std::vector<std::string> labels_;
  std::vector<Element> slots_;
};

}  // namespace deadend
