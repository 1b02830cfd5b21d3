#include <doctest.h>

#include <sstream>

#include "deadend/depth.hpp"
#include "oracles.hpp"

using namespace deadend;

TEST_CASE("cyclic depths") {
  const Group c10 = Group::cyclic(10);
  const Ball b = build_ball(GeneratingSet::parse(c10, "1"), 5);
  CHECK(depth(b, c10.residue(5), 100) == DepthValue::infinite());
  CHECK(depth(b, c10.residue(4), 100) == DepthValue::finite(1));
  CHECK(depth(b, c10.residue(5), 100).to_string() == "inf");

  const Group c11 = Group::cyclic(11);
  const auto p = depth_profile(build_ball(GeneratingSet::parse(c11, "1"), 5), 100);
  for (std::size_t i = 0; i < p.elements.size(); ++i) {
    if (p.norms[i] == 5) {
      CHECK(p.depths[i] == DepthValue::infinite());
    } else {
      CHECK(p.depths[i].is_finite());
      CHECK(p.depths[i].value >= 1);
    }
  }

  const Group c2 = Group::cyclic(2);
  CHECK(depth(build_ball(GeneratingSet::parse(c2, "1"), 1), c2.residue(1), 5) == DepthValue::infinite());
}

TEST_CASE("integer line depth is one") {
  const Group Z = Group::integer_line();
  const Ball b = build_ball(GeneratingSet::parse(Z, "1"), 30);
  for (std::int64_t x = -30; x <= 30; ++x) CHECK(depth(b, Z.integer(x), 5) == DepthValue::finite(1));
  CHECK_THROWS(depth(b, Z.integer(31), 5));
}

TEST_CASE("cap is reported as a lower bound") {
  const auto S = GeneratingSet::parse(Group::lamplighter(), "t,a");
  // {-1,0,1}@0 has norm 7 and every neighbour is shorter.
  const Ball b = build_ball(S, 8);
  const auto p = depth_profile(b, 0xffffffffu);
  REQUIRE(p.max_finite.has_value());
  REQUIRE(*p.max_finite >= 2);
  std::size_t deepest = 0;
  while (p.depths[deepest] != DepthValue::finite(*p.max_finite)) ++deepest;
  const auto k = *p.max_finite;
  CHECK(depth_at(b, deepest, k - 1) == DepthValue::at_least(k - 1));
  CHECK(depth_at(b, deepest, k) == DepthValue::finite(k));
  CHECK(DepthValue::at_least(3).to_string() == ">=3");
}

TEST_CASE("profiles match the oracle on small groups") {
  for (const char* spec : {"cyclic:12", "dihedral:7"}) {
    const Group g = Group::parse(spec);
    for (const char* gens : {"1", "1,2", "r1,s0", "r2,s1"}) {
      if ((g.kind() == GroupKind::Cyclic) != (gens[0] != 'r' && gens[0] != 's')) continue;
      const auto S = GeneratingSet::parse(g, gens);
      const auto oracle = depth_oracle(S);
      const auto radius = oracle.per_norm.size();
      const auto p = depth_profile(build_ball(S, static_cast<std::uint32_t>(radius)), 0xffffffffu);
      CHECK_FALSE(compare_profiles(g, p, oracle).has_value());
    }
  }
}

TEST_CASE("serial and parallel profiles agree") {
  const auto S = GeneratingSet::parse(Group::lamplighter(), "t,a");
  const Ball b = build_ball(S, 6);
  const auto a = depth_profile(b, 4), c = depth_profile_serial(b, 4);
  CHECK_FALSE(compare_profiles(S.group(), a, c).has_value());
  CHECK(a.max_finite == c.max_finite);
  CHECK(a.at_least_count == c.at_least_count);
}

TEST_CASE("lamplighter depths against the tuple oracle") {
  const Group L = Group::lamplighter();
  const auto p = depth_profile(build_ball(GeneratingSet::parse(L, "t,a"), 6), 0xffffffffu);
  const auto truth = oracle::lamplighter_depths(6);
  REQUIRE(truth.depth.size() == p.elements.size());
  for (const auto& [x, d] : truth.depth) {
    std::vector<std::int64_t> lamps(x.lamps.begin(), x.lamps.end());
    const auto got = p.lookup(L.lamplighter_element(lamps, x.cursor));
    REQUIRE(got.has_value());
    CHECK(*got == DepthValue::finite(d));
  }
  CHECK(p.max_finite == truth.max_finite);
}

TEST_CASE("depth csv") {
  const Group c4 = Group::cyclic(4);
  const auto S = GeneratingSet::parse(c4, "1");
  std::ostringstream out;
  write_depth_csv(out, c4, depth_profile(build_ball(S, 2), 10));
  CHECK(out.str() == "element,norm,depth\n0,0,1\n1,1,1\n3,1,1\n2,2,inf\n");
}
