#include "deadend/json_io.hpp"

#include <charconv>
#include <fstream>

namespace deadend {

namespace {

std::string num(std::int64_t v) { return std::to_string(v); }

std::int64_t int_of(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (!j.is_string()) throw ParseError("expected a decimal string, got " + j.dump());
  const auto s = j.get<std::string>();
  std::string_view v = s;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec == std::errc::result_out_of_range) throw OverflowError("integer out of range: " + s);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) throw ParseError("bad integer '" + s + "'");
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json to_json(const Group& g) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = kind_name(g.kind());
  switch (g.kind()) {
    case GroupKind::IntegerLine:
    case GroupKind::Lamplighter: j["int_bits"] = num(g.int_bits()); break;
    case GroupKind::IntegerGrid:
      j["int_bits"] = num(g.int_bits());
      j["rank"] = num(g.parameter());
      break;
    case GroupKind::Cyclic:
    case GroupKind::Dihedral: j["modulus"] = num(g.parameter()); break;
    case GroupKind::Table: {
      const auto* t = g.multiplication_table();
      j["order"] = num(t->order);
      j["identity"] = num(t->identity);
      Json rows = Json::array();
      for (std::uint32_t a = 0; a < t->order; ++a) {
        Json row = Json::array();
        for (std::uint32_t b = 0; b < t->order; ++b) row.push_back(t->at(a, b));
        rows.push_back(std::move(row));
      }
      j["table"] = std::move(rows);
      break;
    }
  }
  return j;
}

Group group_from_json(const Json& j) {
  const auto kind = field(j, "kind").get<std::string>();
  auto bits = [&] { return j.contains("int_bits") ? static_cast<int>(int_of(j.at("int_bits"))) : Group::kDefaultIntBits; };
  if (kind == "integer_line") return Group::integer_line(bits());
  if (kind == "integer_grid") return Group::integer_grid(static_cast<std::uint32_t>(int_of(field(j, "rank"))), bits());
  if (kind == "cyclic") return Group::cyclic(int_of(field(j, "modulus")));
  if (kind == "dihedral") return Group::dihedral(int_of(field(j, "modulus")));
  if (kind == "lamplighter") return Group::lamplighter(bits());
  if (kind == "table") {
    MultiplicationTable t;
    const auto& rows = field(j, "table");
    t.order = j.contains("order") ? static_cast<std::uint32_t>(int_of(j.at("order"))) : static_cast<std::uint32_t>(rows.size());
    t.identity = static_cast<std::uint32_t>(int_of(field(j, "identity")));
    if (!rows.is_array() || rows.size() != t.order) throw ParseError("table must have 'order' rows");
    t.products.reserve(std::size_t(t.order) * t.order);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != t.order) throw ParseError("table rows must have 'order' entries");
      for (const auto& v : row) {
        auto x = int_of(v);
        if (x < 0) throw ParseError("table entries must be nonnegative");
        t.products.push_back(static_cast<std::uint32_t>(x));
      }
    }
    return Group::table(std::move(t));
  }
  throw ParseError("unknown group kind '" + kind + "'");
}

Json element_to_json(const Group& g, const Element& x) {
  g.check_member(x);
  Json j;
  const auto& p = x.payload();
  switch (g.kind()) {
    case GroupKind::IntegerLine: j["value"] = num(p[0]); break;
    case GroupKind::IntegerGrid: {
      Json c = Json::array();
      for (auto v : p) c.push_back(num(v));
      j["coords"] = std::move(c);
      break;
    }
    case GroupKind::Cyclic: j["residue"] = num(p[0]); break;
    case GroupKind::Dihedral:
      j["rotation"] = num(p[0]);
      j["reflection"] = p[1] != 0;
      break;
    case GroupKind::Lamplighter: {
      j["cursor"] = num(p[0]);
      Json l = Json::array();
      for (std::size_t i = 1; i < p.size(); ++i) l.push_back(num(p[i]));
      j["lamps"] = std::move(l);
      break;
    }
    case GroupKind::Table: j["id"] = num(p[0]); break;
  }
  return j;
}

Element element_from_json(const Group& g, const Json& j) {
  switch (g.kind()) {
    case GroupKind::IntegerLine: return g.integer(int_of(field(j, "value")));
    case GroupKind::IntegerGrid: {
      std::vector<std::int64_t> c;
      for (const auto& v : field(j, "coords")) c.push_back(int_of(v));
      return g.vector(c);
    }
    case GroupKind::Cyclic: {
      auto r = int_of(field(j, "residue"));
      if (r < 0 || r >= g.parameter()) throw ParseError("residue not canonical");
      return g.residue(r);
    }
    case GroupKind::Dihedral: {
      auto r = int_of(field(j, "rotation"));
      if (r < 0 || r >= g.parameter()) throw ParseError("rotation not canonical");
      return g.dihedral_element(r, field(j, "reflection").get<bool>());
    }
    case GroupKind::Lamplighter: {
      std::vector<std::int64_t> lamps;
      for (const auto& v : field(j, "lamps")) lamps.push_back(int_of(v));
      for (std::size_t i = 1; i < lamps.size(); ++i) {
        if (lamps[i - 1] >= lamps[i]) throw ParseError("lamp list must be strictly increasing");
      }
      return g.lamplighter_element(std::move(lamps), int_of(field(j, "cursor")));
    }
    case GroupKind::Table: {
      auto id = int_of(field(j, "id"));
      if (id < 0 || id >= g.parameter()) throw ParseError("table id out of range");
      return g.table_element(static_cast<std::uint32_t>(id));
    }
  }
  throw ParseError("unsupported group");
}

Json to_json(const GeneratingSet& gens) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["group"] = to_json(gens.group());
  Json list = Json::array();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    list.push_back({{"element", element_to_json(gens.group(), gens[i])}, {"label", gens.label(i)}});
  }
  j["generators"] = std::move(list);
  return j;
}

GeneratingSet gens_from_json(const Json& j) {
  Group g = group_from_json(field(j, "group"));
  std::vector<Element> entries;
  std::vector<std::string> labels;
  for (const auto& item : field(j, "generators")) {
    entries.push_back(element_from_json(g, field(item, "element")));
    labels.push_back(item.contains("label") ? item.at("label").get<std::string>() : g.format(entries.back()));
  }
  return GeneratingSet(g, std::move(entries), std::move(labels));
}

Json word_to_json(const Word& w) {
  Json a = Json::array();
  for (const auto& l : w) {
    auto v = l.signed_index();
    a.push_back((v > 0 ? "+" : "") + num(v));
  }
  return a;
}

Word word_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("word must be a JSON array");
  Word w;
  for (const auto& v : j) w.push_back(Letter::from_signed(int_of(v)));
  return w;
}

Group load_group(std::string_view spec, int int_bits) {
  if (spec.rfind("table:", 0) == 0) {
    std::string path(spec.substr(6));
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open table file '" + path + "'");
    Json j;
    try {
      in >> j;
    } catch (const Json::exception& e) {
      throw ParseError("table file '" + path + "': " + e.what());
    }
    if (!j.contains("kind")) j["kind"] = "table";
    return group_from_json(j);
  }
  return Group::parse(spec, int_bits);
}

}  // namespace deadend
