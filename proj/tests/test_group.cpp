#include <doctest.h>

#include <random>

#include "deadend/errors.hpp"
#include "deadend/group.hpp"

using namespace deadend;

TEST_CASE("cyclic arithmetic") {
  const Group c10 = Group::cyclic(10);
  CHECK(c10.multiply(c10.residue(7), c10.residue(5)) == c10.residue(2));
  CHECK(c10.invert(c10.residue(3)) == c10.residue(7));
  CHECK(c10.residue(-4) == c10.residue(6));
  CHECK(c10.order() == 10u);
  CHECK_THROWS_AS(Group::cyclic(0), ParseError);
}

TEST_CASE("dihedral relations") {
  const Group d6 = Group::dihedral(6);
  const auto r = d6.dihedral_element(1, false);
  const auto s = d6.dihedral_element(0, true);
  CHECK(d6.multiply(d6.multiply(s, r), s) == d6.invert(r));
  auto x = d6.identity();
  for (int i = 0; i < 6; ++i) x = d6.multiply(x, r);
  CHECK(d6.is_identity(x));
  CHECK(d6.is_identity(d6.multiply(s, s)));
  CHECK(d6.format(d6.multiply(r, s)) == "s1");
  CHECK_THROWS(Group::dihedral(2));
}

TEST_CASE("dense ids agree with multiplication") {
  for (const auto& g : {Group::cyclic(7), Group::dihedral(5)}) {
    const auto m = *g.order();
    for (std::uint64_t a = 0; a < m; ++a) {
      CHECK(g.id_of(g.from_id(a)) == a);
      for (std::uint64_t b = 0; b < m; ++b) {
        CHECK(g.multiply_ids(a, b) == g.id_of(g.multiply(g.from_id(a), g.from_id(b))));
      }
    }
  }
}

TEST_CASE("lamplighter group laws") {
  const Group L = Group::lamplighter();
  const auto t = L.parse_element("t");
  const auto a = L.parse_element("a");
  CHECK(L.format(L.multiply(L.multiply(t, a), L.invert(t))) == "{1}@0");
  CHECK(L.is_identity(L.multiply(a, a)));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 3), coord(-5, 5);
  auto random_element = [&] {
    std::vector<std::int64_t> lamps;
    for (int i = 0; i < pick(rng); ++i) lamps.push_back(coord(rng));
    std::sort(lamps.begin(), lamps.end());
    lamps.erase(std::unique(lamps.begin(), lamps.end()), lamps.end());
    return L.lamplighter_element(lamps, coord(rng));
  };
  for (int i = 0; i < 200; ++i) {
    const auto x = random_element(), y = random_element(), z = random_element();
    CHECK(L.multiply(L.multiply(x, y), z) == L.multiply(x, L.multiply(y, z)));
    CHECK(L.is_identity(L.multiply(x, L.invert(x))));
    CHECK(L.parse_element(L.format(x)) == x);
    CHECK(Element::decode(x.encoding()) == x);
  }
}

TEST_CASE("checked integer arithmetic") {
  const Group z = Group::integer_line(8);
  CHECK(z.multiply(z.integer(100), z.integer(27)) == z.integer(127));
  CHECK_THROWS_AS(z.multiply(z.integer(100), z.integer(28)), OverflowError);
  const Group z64 = Group::integer_line();
  CHECK_THROWS_AS(z64.multiply(z64.integer(INT64_MAX), z64.integer(1)), OverflowError);
}

TEST_CASE("mixed groups are rejected") {
  const Group a = Group::cyclic(10), b = Group::cyclic(12);
  CHECK_THROWS_AS(a.multiply(a.residue(1), b.residue(1)), MixedGroupError);
  CHECK_THROWS_AS(Group::integer_line().multiply(a.residue(1), a.residue(1)), MixedGroupError);
}

TEST_CASE("grid and parse") {
  const Group g = Group::parse("grid:2");
  CHECK(g.format(g.multiply(g.parse_element("[1,2]"), g.parse_element("[-3,5]"))) == "[-2,7]");
  CHECK(Group::parse("zz").kind() == GroupKind::IntegerLine);
  CHECK(Group::parse("d:4").order() == 8u);
  CHECK_THROWS_AS(Group::parse("free:2"), ParseError);
  CHECK_THROWS_AS(g.parse_element("[1,2,3]"), ParseError);
}

TEST_CASE("table groups") {
  // S3 from two transpositions.
  std::vector<std::uint32_t> ids;
  const auto t = table_from_permutations({{1, 0, 2}, {0, 2, 1}}, 100, &ids);
  CHECK(t.order == 6);
  CHECK_NOTHROW(validate_table(t));
  const Group g = Group::table(t);
  const auto a = g.table_element(ids[0]), b = g.table_element(ids[1]);
  auto aba = g.multiply(g.multiply(a, b), a), bab = g.multiply(g.multiply(b, a), b);
  CHECK(aba == bab);

  MultiplicationTable bad = t;
  std::swap(bad.products[7], bad.products[8]);
  CHECK_THROWS_AS(validate_table(bad), ParseError);
  CHECK_THROWS(table_from_permutations({{1, 2, 3, 4, 5, 0}, {1, 0, 2, 3, 4, 5}}, 100));
}
