#include "deadend/word.hpp"

#include <algorithm>
#include <charconv>

namespace deadend {

Letter Letter::from_signed(std::int64_t v) {
  if (v == 0) throw ParseError("word letters are nonzero signed 1-based indices");
  const std::int64_t mag = v < 0 ? -v : v;
  if (mag > std::int64_t{1} << 31) throw ParseError("generator index out of range");
  return {static_cast<std::uint32_t>(mag - 1), v < 0};
}

Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverted());
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string format_word(const Word& w) {
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    auto v = w[i].signed_index();
    out += (v > 0 ? "+" : "") + std::to_string(v);
  }
  return out + "]";
}

Word parse_word(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') text = text.substr(1, text.size() - 2);
  Word w;
  if (text.find_first_not_of(' ') == std::string_view::npos) return w;
  for (const auto& item : split_top_level(text)) {
    std::string_view s = item;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad word letter '" + item + "'");
    w.push_back(Letter::from_signed(v));
  }
  return w;
}

GeneratingSet::GeneratingSet(Group group, std::vector<Element> entries, std::vector<std::string> labels)
    : group_(std::move(group)), entries_(std::move(entries)), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != entries_.size()) throw ParseError("one label per generator required");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    group_.check_member(entries_[i]);
    if (group_.is_identity(entries_[i])) throw ParseError("generating sets may not contain the identity");
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[j] == entries_[i]) throw ParseError("duplicate generator " + group_.format(entries_[i]));
    }
  }
  if (labels_.empty()) {
    for (const auto& e : entries_) labels_.push_back(group_.format(e));
  }
  slots_.reserve(2 * entries_.size());
  for (const auto& e : entries_) {
    slots_.push_back(e);
    slots_.push_back(group_.invert(e));
  }
}

GeneratingSet GeneratingSet::parse(const Group& group, std::string_view text) {
  std::vector<Element> entries;
  std::vector<std::string> labels;
  for (const auto& item : split_top_level(text)) {
    entries.push_back(group.parse_element(item));
    labels.push_back(item);
  }
  return GeneratingSet(group, std::move(entries), std::move(labels));
}

const Element& GeneratingSet::letter_element(Letter l) const {
  if (l.generator >= entries_.size()) {
    throw ParseError("generator index " + std::to_string(l.generator + 1) + " out of range (have " +
                     std::to_string(entries_.size()) + ")");
  }
  return slots_[l.slot()];
}

Element GeneratingSet::evaluate(const Word& w) const {
  Element acc = group_.identity();
  for (const auto& l : w) acc = group_.multiply(acc, letter_element(l));
  return acc;
}

GeneratingSet GeneratingSet::symmetrized() const {
  std::vector<Element> all(entries_);
  std::vector<std::string> labels(labels_);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Element& inv = slots_[2 * i + 1];
    if (std::find(all.begin(), all.end(), inv) == all.end()) {
      all.push_back(inv);
      labels.push_back(labels_[i] + "^-1");
    }
  }
  return GeneratingSet(group_, std::move(all), std::move(labels));
}

std::ptrdiff_t GeneratingSet::find(const Element& x) const {
  auto it = std::find(entries_.begin(), entries_.end(), x);
  return it == entries_.end() ? -1 : it - entries_.begin();
}

}  // namespace deadend
