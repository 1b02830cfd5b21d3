#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "deadend/ball_cache.hpp"
#include "deadend/cayley.hpp"
#include "deadend/errors.hpp"
#include "oracles.hpp"

using namespace deadend;

namespace {

std::vector<std::uint64_t> spheres(const Ball& b) { return {b.sphere_sizes().begin(), b.sphere_sizes().end()}; }

std::filesystem::path temp_dir(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("cyclic ball") {
  const auto S = GeneratingSet::parse(Group::cyclic(10), "1");
  const Ball b = build_ball(S, 5);
  CHECK(b.size() == 10);
  CHECK(spheres(b) == std::vector<std::uint64_t>{1, 2, 2, 2, 2, 1});
  CHECK_FALSE(b.saturated());
  const Ball big = build_ball(S, 9);
  CHECK(big.saturated());
  CHECK(big.norm(Group::cyclic(10).residue(5)) == 5u);
}

TEST_CASE("integer lattice spheres") {
  const auto S = GeneratingSet::parse(Group::parse("grid:2"), "[1,0],[0,1]");
  const Ball b = build_ball(S, 6);
  for (std::uint32_t r = 1; r <= 6; ++r) CHECK(b.sphere_sizes()[r] == 4 * r);
  const auto x = S.group().parse_element("[2,-3]");
  CHECK(b.norm(x) == 5u);
  CHECK(S.evaluate(b.geodesic(x)) == x);
}

TEST_CASE("norms in Z against the oracle") {
  const Group Z = Group::integer_line();
  const auto S = GeneratingSet::parse(Z, "3,7");
  const Ball b = build_ball(S, 6);
  const auto truth = oracle::integer_norms({3, 7}, 200);
  for (const auto& [x, d] : truth) {
    if (d <= 6) CHECK(b.norm(Z.integer(x)) == d);
  }
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(truth.at(b.element(i)[0]) == b.distance(i));
}

TEST_CASE("lamplighter ball against the oracle") {
  const Group L = Group::lamplighter();
  const Ball b = build_ball(GeneratingSet::parse(L, "t,a"), 7);
  const auto truth = oracle::lamplighter_depths(6);
  std::size_t within = 0;
  for (const auto& [x, d] : truth.norm) {
    std::vector<std::int64_t> lamps(x.lamps.begin(), x.lamps.end());
    CHECK(b.norm(L.lamplighter_element(lamps, x.cursor)) == d);
    ++within;
  }
  CHECK(within == b.size());
}

TEST_CASE("parallel ball equals the serial reference") {
  std::vector<GeneratingSet> sets{
      GeneratingSet::parse(Group::integer_line(), "2,5"),
      GeneratingSet::parse(Group::parse("grid:3"), "[1,0,0],[0,1,0],[1,1,1]"),
      GeneratingSet::parse(Group::dihedral(9), "r1,s0"),
      GeneratingSet::parse(Group::lamplighter(), "t,a"),
      GeneratingSet::parse(Group::lamplighter(), "a,t,{0,1}@1"),
  };
  for (const auto& S : sets) {
    for (std::uint32_t r : {0u, 1u, 4u, 8u}) CHECK(build_ball(S, r) == build_ball_serial(S, r));
  }
}

TEST_CASE("geodesics are first-parent and valid") {
  const auto S = GeneratingSet::parse(Group::lamplighter(), "t,a");
  const Ball b = build_ball(S, 6);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Word w = b.geodesic_at(i);
    CHECK(w.size() == b.distance(i));
    CHECK(S.evaluate(w) == b.element(i));
  }
}

TEST_CASE("budgets") {
  const auto S = GeneratingSet::parse(Group::parse("grid:2"), "[1,0],[0,1]");
  Budget tight;
  tight.max_elements = 50;
  try {
    build_ball(S, 20, tight);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    // |B_4| = 41, |B_5| = 61.
    CHECK(e.radius_reached() == 4);
  }
  Budget shallow;
  shallow.max_radius = 3;
  CHECK_THROWS_AS(build_ball(S, 4, shallow), BudgetExceeded);
  CHECK_THROWS_AS(build_ball_serial(S, 20, tight), BudgetExceeded);
}

TEST_CASE("trivial group") {
  const auto S = GeneratingSet(Group::cyclic(1), {});
  const Ball b = build_ball(S, 3);
  CHECK(b.size() == 1);
  CHECK(b.saturated());
}

TEST_CASE("ball cache round trip") {
  const auto dir = temp_dir("deadend_cache_test");
  const auto S = GeneratingSet::parse(Group::lamplighter(), "t,a");
  const BallCache cache(dir);
  bool hit = true;
  const Ball first = cache.get_or_build(S, 6, {}, &hit);
  CHECK_FALSE(hit);
  const Ball second = cache.get_or_build(S, 6, {}, &hit);
  CHECK(hit);
  CHECK(first == second);

  // A ball file for other inputs is refused.
  const auto other = GeneratingSet::parse(Group::lamplighter(), "a,t");
  CHECK_THROWS_AS(load_ball(cache.path_for(S, 6), other, 6), ParseError);
  CHECK_THROWS_AS(load_ball(cache.path_for(S, 6), S, 5), ParseError);

  // Truncated files are refused.
  const auto path = cache.path_for(S, 6);
  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 3);
  CHECK_THROWS_AS(load_ball(path, S, 6), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("norm csv") {
  const auto S = GeneratingSet::parse(Group::parse("grid:2"), "[1,0],[0,1]");
  std::ostringstream out;
  write_norm_csv(out, build_ball(S, 1));
  CHECK(out.str() == "element,norm\n\"[0,0]\",0\n\"[1,0]\",1\n\"[-1,0]\",1\n\"[0,1]\",1\n\"[0,-1]\",1\n");
}
