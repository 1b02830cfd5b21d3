#include "deadend/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <limits>
#include <random>
#include <unordered_map>

#include "deadend/digest.hpp"

namespace deadend {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range) throw OverflowError("integer literal out of range: " + std::string(s));
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::int64_t> parse_int_list(std::string_view inner) {
  std::vector<std::int64_t> out;
  if (trim(inner).empty()) return out;
  for (const auto& item : split_top_level(inner)) out.push_back(parse_int(item));
  return out;
}

std::string join_ints(std::span<const std::int64_t> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

std::string_view kind_name(GroupKind kind) {
  switch (kind) {
    case GroupKind::IntegerLine: return "integer_line";
    case GroupKind::IntegerGrid: return "integer_grid";
    case GroupKind::Cyclic: return "cyclic";
    case GroupKind::Dihedral: return "dihedral";
    case GroupKind::Lamplighter: return "lamplighter";
    case GroupKind::Table: return "table";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Element

std::string Element::encoding() const {
  std::string out(4 + 8 * payload_.size(), '\0');
  for (int b = 0; b < 4; ++b) out[b] = static_cast<char>((tag_ >> (8 * b)) & 0xff);
  for (std::size_t i = 0; i < payload_.size(); ++i) {
    auto u = static_cast<std::uint64_t>(payload_[i]);
    for (int b = 0; b < 8; ++b) out[4 + 8 * i + b] = static_cast<char>((u >> (8 * b)) & 0xff);
  }
  return out;
}

Element Element::decode(std::string_view bytes) {
  if (bytes.size() < 4 || (bytes.size() - 4) % 8 != 0) throw ParseError("bad element encoding length");
  std::uint32_t tag = 0;
  for (int b = 0; b < 4; ++b) tag |= std::uint32_t(static_cast<unsigned char>(bytes[b])) << (8 * b);
  Payload p;
  for (std::size_t i = 0; i < (bytes.size() - 4) / 8; ++i) {
    std::uint64_t u = 0;
    for (int b = 0; b < 8; ++b) u |= std::uint64_t(static_cast<unsigned char>(bytes[4 + 8 * i + b])) << (8 * b);
    p.push_back(static_cast<std::int64_t>(u));
  }
  return Element(tag, std::move(p));
}

std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept {
  if (auto c = a.tag_ <=> b.tag_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.payload_.begin(), a.payload_.end(), b.payload_.begin(),
                                                b.payload_.end());
}

std::size_t Element::hash() const noexcept {
  std::uint64_t h = mix64(tag_);
  for (auto x : payload_) h = mix64(h ^ static_cast<std::uint64_t>(x));
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Tables

void validate_table(const MultiplicationTable& t) {
  const std::uint32_t m = t.order;
  if (m == 0) throw ParseError("table group must have at least one element");
  if (t.products.size() != std::size_t(m) * m) throw ParseError("table must be order x order");
  if (t.identity >= m) throw ParseError("identity id out of range");
  for (auto v : t.products) {
    if (v >= m) throw ParseError("table entry out of range");
  }
  for (std::uint32_t a = 0; a < m; ++a) {
    if (t.at(t.identity, a) != a || t.at(a, t.identity) != a) {
      throw ParseError("identity law fails at id " + std::to_string(a));
    }
  }
  // Latin square: every row and column is a permutation, which gives inverses.
  std::vector<std::uint32_t> seen(m, std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t a = 0; a < m; ++a) {
    for (std::uint32_t b = 0; b < m; ++b) {
      auto v = t.at(a, b);
      if (seen[v] == 2 * a) throw ParseError("row " + std::to_string(a) + " repeats an entry");
      seen[v] = 2 * a;
    }
  }
  std::fill(seen.begin(), seen.end(), std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t b = 0; b < m; ++b) {
    for (std::uint32_t a = 0; a < m; ++a) {
      auto v = t.at(a, b);
      if (seen[v] == 2 * b + 1) throw ParseError("column " + std::to_string(b) + " repeats an entry");
      seen[v] = 2 * b + 1;
    }
  }
  auto assoc = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    if (t.at(t.at(a, b), c) != t.at(a, t.at(b, c))) {
      throw ParseError("associativity fails at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                       std::to_string(c) + ")");
    }
  };
  if (m <= 512) {
    for (std::uint32_t a = 0; a < m; ++a)
      for (std::uint32_t b = 0; b < m; ++b)
        for (std::uint32_t c = 0; c < m; ++c) assoc(a, b, c);
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::uint32_t> pick(0, m - 1);
    for (int i = 0; i < 1'000'000; ++i) assoc(pick(rng), pick(rng), pick(rng));
  }
}

MultiplicationTable table_from_permutations(const std::vector<std::vector<std::uint32_t>>& generators,
                                            std::size_t max_order, std::vector<std::uint32_t>* generator_ids) {
  using Perm = std::vector<std::uint32_t>;
  const std::size_t degree = generators.empty() ? 0 : generators.front().size();
  for (const auto& g : generators) {
    if (g.size() != degree) throw ParseError("permutations must share a degree");
    Perm check(g);
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < degree; ++i) {
      if (check[i] != i) throw ParseError("not a permutation");
    }
  }
  auto compose = [](const Perm& x, const Perm& y) {
    Perm r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = y[x[i]];
    return r;
  };
  struct PermHash {
    std::size_t operator()(const Perm& p) const noexcept {
      std::uint64_t h = 0;
      for (auto v : p) h = mix64(h ^ v);
      return h;
    }
  };

  Perm id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<std::uint32_t>(i);
  std::vector<Perm> elems{id};
  std::unordered_map<Perm, std::uint32_t, PermHash> index{{id, 0}};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& g : generators) {
      Perm p = compose(elems[head], g);
      if (index.emplace(p, static_cast<std::uint32_t>(elems.size())).second) {
        elems.push_back(std::move(p));
        if (elems.size() > max_order) throw Error("permutation group exceeds order bound");
      }
    }
  }

  MultiplicationTable t;
  t.order = static_cast<std::uint32_t>(elems.size());
  t.identity = 0;
  t.products.resize(std::size_t(t.order) * t.order);
  for (std::uint32_t a = 0; a < t.order; ++a)
    for (std::uint32_t b = 0; b < t.order; ++b) t.products[std::size_t(a) * t.order + b] = index.at(compose(elems[a], elems[b]));
  if (generator_ids) {
    generator_ids->clear();
    for (const auto& g : generators) generator_ids->push_back(index.at(g));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Group

struct Group::Impl {
  GroupKind kind;
  std::int64_t param = 1;
  int int_bits = kDefaultIntBits;
  std::uint32_t tag = 0;
  MultiplicationTable table;
  std::vector<std::uint32_t> inverses;  // Table only
};

namespace {

std::uint32_t compute_tag(GroupKind kind, std::int64_t param, int bits, const MultiplicationTable* t) {
  std::string key(kind_name(kind));
  key += ':' + std::to_string(param) + ':' + std::to_string(bits);
  if (t) {
    key += ':' + std::to_string(t->identity) + ':';
    key.append(reinterpret_cast<const char*>(t->products.data()), t->products.size() * sizeof(std::uint32_t));
  }
  auto hex = sha256_hex(key);
  return static_cast<std::uint32_t>(std::stoul(hex.substr(0, 8), nullptr, 16));
}

void check_bits(int bits) {
  if (bits < 2 || bits > 64) throw ParseError("integer bit width must be in [2, 64]");
}

}  // namespace

Group Group::integer_line(int int_bits) {
  check_bits(int_bits);
  auto impl = std::make_shared<Impl>();
  impl->kind = GroupKind::IntegerLine;
  impl->int_bits = int_bits;
  impl->tag = compute_tag(impl->kind, 1, int_bits, nullptr);
  return Group(std::move(impl));
}

Group Group::integer_grid(std::uint32_t rank, int int_bits) {
  check_bits(int_bits);
  if (rank < 1) throw ParseError("grid rank must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = GroupKind::IntegerGrid;
  impl->param = rank;
  impl->int_bits = int_bits;
  impl->tag = compute_tag(impl->kind, rank, int_bits, nullptr);
  return Group(std::move(impl));
}

Group Group::cyclic(std::int64_t m) {
  if (m < 1 || m > (std::int64_t{1} << 62)) throw ParseError("cyclic order must be in [1, 2^62]");
  auto impl = std::make_shared<Impl>();
  impl->kind = GroupKind::Cyclic;
  impl->param = m;
  impl->tag = compute_tag(impl->kind, m, kDefaultIntBits, nullptr);
  return Group(std::move(impl));
}

Group Group::dihedral(std::int64_t m) {
  if (m < 3 || m > (std::int64_t{1} << 61)) throw ParseError("dihedral parameter must be in [3, 2^61]");
  auto impl = std::make_shared<Impl>();
  impl->kind = GroupKind::Dihedral;
  impl->param = m;
  impl->tag = compute_tag(impl->kind, m, kDefaultIntBits, nullptr);
  return Group(std::move(impl));
}

Group Group::lamplighter(int int_bits) {
  check_bits(int_bits);
  auto impl = std::make_shared<Impl>();
  impl->kind = GroupKind::Lamplighter;
  impl->int_bits = int_bits;
  impl->tag = compute_tag(impl->kind, 1, int_bits, nullptr);
  return Group(std::move(impl));
}

Group Group::table(MultiplicationTable table) {
  validate_table(table);
  auto impl = std::make_shared<Impl>();
  impl->kind = GroupKind::Table;
  impl->param = table.order;
  impl->inverses.resize(table.order);
  for (std::uint32_t a = 0; a < table.order; ++a)
    for (std::uint32_t b = 0; b < table.order; ++b)
      if (table.at(a, b) == table.identity) impl->inverses[a] = b;
  impl->tag = compute_tag(impl->kind, table.order, kDefaultIntBits, &table);
  impl->table = std::move(table);
  return Group(std::move(impl));
}

Group Group::parse(std::string_view spec, int int_bits) {
  spec = trim(spec);
  auto colon = spec.find(':');
  std::string_view head = spec.substr(0, colon);
  std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if ((head == "zz" || head == "z" || head == "integer") && arg.empty()) return integer_line(int_bits);
  if (head == "grid" || head == "zz^") return integer_grid(static_cast<std::uint32_t>(parse_int(arg)), int_bits);
  if (head == "cyclic" || head == "c") return cyclic(parse_int(arg));
  if (head == "dihedral" || head == "d") return dihedral(parse_int(arg));
  if (head == "lamplighter" && arg.empty()) return lamplighter(int_bits);
  throw ParseError("unknown group spec '" + std::string(spec) + "'");
}

GroupKind Group::kind() const noexcept { return impl_->kind; }
std::int64_t Group::parameter() const noexcept { return impl_->param; }
int Group::int_bits() const noexcept { return impl_->int_bits; }
std::uint32_t Group::tag() const noexcept { return impl_->tag; }

const MultiplicationTable* Group::multiplication_table() const noexcept {
  return impl_->kind == GroupKind::Table ? &impl_->table : nullptr;
}

bool Group::is_finite() const noexcept {
  auto k = impl_->kind;
  return k == GroupKind::Cyclic || k == GroupKind::Dihedral || k == GroupKind::Table;
}

std::optional<std::uint64_t> Group::order() const noexcept {
  switch (impl_->kind) {
    case GroupKind::Cyclic: return static_cast<std::uint64_t>(impl_->param);
    case GroupKind::Dihedral: return 2 * static_cast<std::uint64_t>(impl_->param);
    case GroupKind::Table: return impl_->table.order;
    default: return std::nullopt;
  }
}

std::string Group::name() const {
  switch (impl_->kind) {
    case GroupKind::IntegerLine: return "zz";
    case GroupKind::IntegerGrid: return "grid:" + std::to_string(impl_->param);
    case GroupKind::Cyclic: return "cyclic:" + std::to_string(impl_->param);
    case GroupKind::Dihedral: return "dihedral:" + std::to_string(impl_->param);
    case GroupKind::Lamplighter: return "lamplighter";
    case GroupKind::Table: return "table:" + std::to_string(impl_->param);
  }
  return "?";
}

bool operator==(const Group& a, const Group& b) noexcept {
  if (a.impl_ == b.impl_) return true;
  const auto& x = *a.impl_;
  const auto& y = *b.impl_;
  return x.kind == y.kind && x.param == y.param && x.int_bits == y.int_bits && x.tag == y.tag &&
         x.table.identity == y.table.identity && x.table.products == y.table.products;
}

std::int64_t Group::add(std::int64_t a, std::int64_t b) const {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in group operation");
  const int bits = impl_->int_bits;
  if (bits < 64) {
    const std::int64_t lim = std::int64_t{1} << (bits - 1);
    if (r < -lim || r >= lim) {
      throw OverflowError("value " + std::to_string(r) + " exceeds the " + std::to_string(bits) + "-bit cap");
    }
  }
  return r;
}

std::int64_t Group::negate(std::int64_t a) const {
  if (a == std::numeric_limits<std::int64_t>::min()) throw OverflowError("integer overflow in negation");
  return add(0, -a);
}

void Group::check_member(const Element& x) const {
  const auto& im = *impl_;
  if (x.tag() != im.tag) throw MixedGroupError("element does not belong to group " + name());
  const auto& p = x.payload();
  auto bad = [&] { throw MixedGroupError("malformed element payload for group " + name()); };
  switch (im.kind) {
    case GroupKind::IntegerLine:
      if (p.size() != 1) bad();
      break;
    case GroupKind::IntegerGrid:
      if (p.size() != std::size_t(im.param)) bad();
      break;
    case GroupKind::Cyclic:
      if (p.size() != 1 || p[0] < 0 || p[0] >= im.param) bad();
      break;
    case GroupKind::Dihedral:
      if (p.size() != 2 || p[0] < 0 || p[0] >= im.param || (p[1] != 0 && p[1] != 1)) bad();
      break;
    case GroupKind::Lamplighter:
      if (p.empty()) bad();
      for (std::size_t i = 2; i < p.size(); ++i)
        if (p[i - 1] >= p[i]) bad();
      break;
    case GroupKind::Table:
      if (p.size() != 1 || p[0] < 0 || p[0] >= im.param) bad();
      break;
  }
}

Element Group::identity() const {
  const auto& im = *impl_;
  switch (im.kind) {
    case GroupKind::IntegerLine: return Element(im.tag, {0});
    case GroupKind::IntegerGrid: return Element(im.tag, Element::Payload(std::size_t(im.param), 0));
    case GroupKind::Cyclic: return Element(im.tag, {0});
    case GroupKind::Dihedral: return Element(im.tag, {0, 0});
    case GroupKind::Lamplighter: return Element(im.tag, {0});
    case GroupKind::Table: return Element(im.tag, {std::int64_t(im.table.identity)});
  }
  return {};
}

bool Group::is_identity(const Element& x) const { return x == identity(); }

Element Group::multiply(const Element& x, const Element& y) const {
  const auto& im = *impl_;
  if (x.tag() != im.tag || y.tag() != im.tag) throw MixedGroupError("operands do not belong to group " + name());
  const auto& a = x.payload();
  const auto& b = y.payload();
  switch (im.kind) {
    case GroupKind::IntegerLine: return Element(im.tag, {add(a[0], b[0])});
    case GroupKind::IntegerGrid: {
      Element::Payload r(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) r[i] = add(a[i], b[i]);
      return Element(im.tag, std::move(r));
    }
    case GroupKind::Cyclic: {
      auto s = static_cast<std::uint64_t>(a[0]) + static_cast<std::uint64_t>(b[0]);
      return Element(im.tag, {static_cast<std::int64_t>(s % static_cast<std::uint64_t>(im.param))});
    }
    case GroupKind::Dihedral: {
      // (r1, s1)(r2, s2) = (r1 + (-1)^s1 r2, s1 xor s2)
      const std::int64_t m = im.param;
      std::int64_t r = a[1] ? mod_floor(a[0] - b[0], m) : (a[0] + b[0]) % m;
      return Element(im.tag, {r, a[1] ^ b[1]});
    }
    case GroupKind::Lamplighter: {
      // (f1, c1)(f2, c2) = (f1 xor shift(f2, c1), c1 + c2)
      const std::int64_t c1 = a[0];
      Element::Payload r;
      r.reserve(a.size() + b.size());
      r.push_back(add(c1, b[0]));
      std::size_t i = 1, j = 1;
      while (i < a.size() || j < b.size()) {
        if (j == b.size()) {
          r.push_back(a[i++]);
        } else {
          const std::int64_t shifted = add(b[j], c1);
          if (i == a.size() || shifted < a[i]) {
            r.push_back(shifted);
            ++j;
          } else if (a[i] < shifted) {
            r.push_back(a[i++]);
          } else {
            ++i;
            ++j;
          }
        }
      }
      return Element(im.tag, std::move(r));
    }
    case GroupKind::Table:
      return Element(im.tag, {std::int64_t(im.table.at(static_cast<std::uint32_t>(a[0]), static_cast<std::uint32_t>(b[0])))});
  }
  return {};
}

Element Group::invert(const Element& x) const {
  const auto& im = *impl_;
  if (x.tag() != im.tag) throw MixedGroupError("operand does not belong to group " + name());
  const auto& a = x.payload();
  switch (im.kind) {
    case GroupKind::IntegerLine: return Element(im.tag, {negate(a[0])});
    case GroupKind::IntegerGrid: {
      Element::Payload r(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) r[i] = negate(a[i]);
      return Element(im.tag, std::move(r));
    }
    case GroupKind::Cyclic: return Element(im.tag, {a[0] == 0 ? 0 : im.param - a[0]});
    case GroupKind::Dihedral:
      if (a[1]) return x;
      return Element(im.tag, {a[0] == 0 ? 0 : im.param - a[0], 0});
    case GroupKind::Lamplighter: {
      // (f, c)^-1 = (shift(f, -c), -c)
      Element::Payload r;
      r.reserve(a.size());
      const std::int64_t c = a[0];
      r.push_back(negate(c));
      for (std::size_t i = 1; i < a.size(); ++i) r.push_back(add(a[i], r[0]));
      return Element(im.tag, std::move(r));
    }
    case GroupKind::Table: return Element(im.tag, {std::int64_t(im.inverses[static_cast<std::size_t>(a[0])])});
  }
  return {};
}

Element Group::integer(std::int64_t x) const {
  if (impl_->kind == GroupKind::IntegerLine) return Element(impl_->tag, {add(0, x)});
  if (impl_->kind == GroupKind::Cyclic) return residue(x);
  if (impl_->kind == GroupKind::Table) return table_element(static_cast<std::uint32_t>(x));
  throw MixedGroupError("integer literal is not an element of " + name());
}

Element Group::vector(std::span<const std::int64_t> coords) const {
  if (impl_->kind != GroupKind::IntegerGrid) throw MixedGroupError("vector literal is not an element of " + name());
  if (coords.size() != std::size_t(impl_->param)) throw ParseError("vector has wrong rank for " + name());
  Element::Payload p;
  for (auto c : coords) p.push_back(add(0, c));
  return Element(impl_->tag, std::move(p));
}

Element Group::residue(std::int64_t r) const {
  if (impl_->kind != GroupKind::Cyclic) throw MixedGroupError("residue is not an element of " + name());
  return Element(impl_->tag, {mod_floor(r, impl_->param)});
}

Element Group::dihedral_element(std::int64_t rotation, bool reflection) const {
  if (impl_->kind != GroupKind::Dihedral) throw MixedGroupError("dihedral literal is not an element of " + name());
  return Element(impl_->tag, {mod_floor(rotation, impl_->param), reflection ? 1 : 0});
}

Element Group::lamplighter_element(std::vector<std::int64_t> lamps, std::int64_t cursor) const {
  if (impl_->kind != GroupKind::Lamplighter) throw MixedGroupError("lamplighter literal is not an element of " + name());
  std::sort(lamps.begin(), lamps.end());
  if (std::adjacent_find(lamps.begin(), lamps.end()) != lamps.end()) throw ParseError("duplicate lamp position");
  Element::Payload p{add(0, cursor)};
  for (auto l : lamps) p.push_back(add(0, l));
  return Element(impl_->tag, std::move(p));
}

Element Group::table_element(std::uint32_t id) const {
  if (impl_->kind != GroupKind::Table) throw MixedGroupError("table id is not an element of " + name());
  if (id >= impl_->table.order) throw ParseError("table id out of range");
  return Element(impl_->tag, {std::int64_t(id)});
}

std::uint64_t Group::id_of(const Element& x) const {
  check_member(x);
  switch (impl_->kind) {
    case GroupKind::Cyclic:
    case GroupKind::Table: return static_cast<std::uint64_t>(x[0]);
    case GroupKind::Dihedral: return static_cast<std::uint64_t>(x[0] + impl_->param * x[1]);
    default: throw Error("dense ids exist only for finite groups");
  }
}

Element Group::from_id(std::uint64_t id) const {
  const auto& im = *impl_;
  switch (im.kind) {
    case GroupKind::Cyclic:
    case GroupKind::Table:
      if (id >= static_cast<std::uint64_t>(im.param)) throw Error("id out of range");
      return Element(im.tag, {static_cast<std::int64_t>(id)});
    case GroupKind::Dihedral:
      if (id >= 2 * static_cast<std::uint64_t>(im.param)) throw Error("id out of range");
      return Element(im.tag, {static_cast<std::int64_t>(id % im.param), static_cast<std::int64_t>(id / im.param)});
    default: throw Error("dense ids exist only for finite groups");
  }
}

std::uint64_t Group::multiply_ids(std::uint64_t a, std::uint64_t b) const {
  const auto& im = *impl_;
  const auto m = static_cast<std::uint64_t>(im.param);
  switch (im.kind) {
    case GroupKind::Cyclic: return a + b >= m ? a + b - m : a + b;  // ids are < m
    case GroupKind::Table: return im.table.at(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
    case GroupKind::Dihedral: {
      const std::uint64_t r1 = a % m, s1 = a / m, r2 = b % m, s2 = b / m;
      const std::uint64_t r = s1 ? (r1 + m - r2) % m : (r1 + r2) % m;
      return r + m * (s1 ^ s2);
    }
    default: throw Error("dense ids exist only for finite groups");
  }
}

std::string Group::format(const Element& x) const {
  check_member(x);
  const auto& p = x.payload();
  switch (impl_->kind) {
    case GroupKind::IntegerLine:
    case GroupKind::Cyclic:
    case GroupKind::Table: return std::to_string(p[0]);
    case GroupKind::IntegerGrid: return "[" + join_ints({p.data(), p.size()}) + "]";
    case GroupKind::Dihedral: return (p[1] ? "s" : "r") + std::to_string(p[0]);
    case GroupKind::Lamplighter: return "{" + join_ints({p.data() + 1, p.size() - 1}) + "}@" + std::to_string(p[0]);
  }
  return "?";
}

Element Group::parse_element(std::string_view text) const {
  text = trim(text);
  if (text.empty()) throw ParseError("empty element literal");
  switch (impl_->kind) {
    case GroupKind::IntegerLine: return integer(parse_int(text));
    case GroupKind::Cyclic: return residue(parse_int(text));
    case GroupKind::Table: {
      auto v = parse_int(text);
      if (v < 0 || v >= impl_->param) throw ParseError("table id out of range: " + std::string(text));
      return table_element(static_cast<std::uint32_t>(v));
    }
    case GroupKind::IntegerGrid: {
      if ((text.front() == '[' && text.back() == ']') || (text.front() == '(' && text.back() == ')')) {
        auto v = parse_int_list(text.substr(1, text.size() - 2));
        return vector(v);
      }
      if (impl_->param == 1) {
        std::int64_t v = parse_int(text);
        return vector(std::span<const std::int64_t>(&v, 1));
      }
      throw ParseError("grid elements are written [x1,...,xd]");
    }
    case GroupKind::Dihedral: {
      if (text == "e") return identity();
      if (text.front() == 'r' || text.front() == 's') return dihedral_element(parse_int(text.substr(1)), text.front() == 's');
      throw ParseError("dihedral elements are written r<k> or s<k>");
    }
    case GroupKind::Lamplighter: {
      if (text == "e") return identity();
      if (text == "t") return lamplighter_element({}, 1);
      if (text == "a") return lamplighter_element({0}, 0);
      auto at = text.rfind('@');
      if (text.front() != '{' || at == std::string_view::npos || at == 0 || text[at - 1] != '}') {
        throw ParseError("lamplighter elements are written t, a, e or {l1,...}@cursor");
      }
      return lamplighter_element(parse_int_list(text.substr(1, at - 2)), parse_int(text.substr(at + 1)));
    }
  }
  throw ParseError("unsupported group");
}

std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    auto item = trim(text.substr(start, end - start));
    if (item.empty()) throw ParseError("empty item in list '" + std::string(text) + "'");
    out.emplace_back(item);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (depth < 0) throw ParseError("unbalanced brackets in '" + std::string(text) + "'");
    if (c == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced brackets in '" + std::string(text) + "'");
  flush(text.size());
  return out;
}

}  // namespace deadend
