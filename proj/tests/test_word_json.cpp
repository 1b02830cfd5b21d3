#include <doctest.h>

#include "deadend/json_io.hpp"
#include "deadend/word.hpp"

using namespace deadend;

TEST_CASE("words") {
  const Word w = parse_word("[+1,-2,1]");
  REQUIRE(w.size() == 3);
  CHECK(w[1].generator == 1);
  CHECK(w[1].inverse);
  CHECK(format_word(w) == "[+1,-2,+1]");
  CHECK(format_word(inverse_word(w)) == "[-1,+2,-1]");
  CHECK_THROWS(parse_word("[0]"));
  CHECK_THROWS(parse_word("[+1"));
}

TEST_CASE("evaluate words") {
  const Group c10 = Group::cyclic(10);
  const auto S = GeneratingSet::parse(c10, "1");
  CHECK(S.evaluate(parse_word("[-1,-1,-1,-1]")) == c10.residue(6));
  CHECK(S.evaluate({}) == c10.identity());
  CHECK_THROWS(S.evaluate(parse_word("[+2]")));
  CHECK_THROWS(GeneratingSet::parse(c10, "0"));
  CHECK_THROWS(GeneratingSet::parse(c10, "1,1"));
}

TEST_CASE("json round trips") {
  for (const char* spec : {"zz", "grid:3", "cyclic:12", "dihedral:5", "lamplighter"}) {
    const Group g = Group::parse(spec);
    CHECK(group_from_json(to_json(g)) == g);
  }
  const Group L = Group::lamplighter();
  const auto x = L.parse_element("{-2,3}@1");
  CHECK(element_from_json(L, element_to_json(L, x)) == x);
  const auto S = GeneratingSet::parse(Group::dihedral(6), "r1,s0");
  CHECK(gens_from_json(Json::parse(to_json(S).dump())) == S);
  const Word w = parse_word("[+2,-1]");
  CHECK(word_from_json(word_to_json(w)) == w);

  std::vector<std::uint32_t> ids;
  const Group t = Group::table(table_from_permutations({{1, 2, 0}}, 10, &ids));
  CHECK(group_from_json(to_json(t)) == t);
}
