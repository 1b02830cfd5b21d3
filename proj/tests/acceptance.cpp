// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "deadend/construction.hpp"
#include "deadend/depth.hpp"
#include "deadend/errors.hpp"
#include "oracles.hpp"

using namespace deadend;

namespace {

// Maximum finite dead-end depth in the lamplighter ball of radius 8 under
// {t, a}. Pinned from the first run and cross-checked against the tuple
// oracle on every run.
constexpr std::uint32_t kLamplighterMaxDepthR8 = 3;

constexpr std::uint32_t kNoCap = 0xffffffffu;

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

ConstructionContext integer_context(std::int64_t m, std::uint32_t D, BoundMode mode) {
  const auto S = GeneratingSet::parse(Group::integer_line(), "1");
  const auto pi = QuotientMap::native(S, m);
  const auto n = diameter(pi.target_gens()).diameter;
  return make_context(build_generating_set(pi, ConstructionParams::for_target(D, n, mode), {}), {});
}

std::vector<std::int64_t> integers(const GeneratingSet& A) {
  std::vector<std::int64_t> out;
  for (const auto& a : A.entries()) out.push_back(a[0]);
  return out;
}

std::int64_t mod(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

void criterion1(Check& c) {
  const auto ctx = integer_context(10, 3, BoundMode::Paper);
  const auto& p = ctx.params();
  c.expect(p.d == 2 && p.n == 5 && p.N == 78, "params are not d=2, n=5, N=78; ");

  std::set<std::int64_t> want, got;
  for (std::int64_t k = -78; k <= 78; ++k) {
    if (mod(k, 10) == 1) want.insert(k);
  }
  for (auto a : integers(ctx.A())) got.insert(a);
  c.expect(got == want, "A differs from {k : |k| <= 78, k = 1 mod 10}; ");

  // Exhaustive norms over A from the independent integer oracle. Paths of
  // length <= 7 stay within 7 * 78 of the origin.
  const auto truth = oracle::integer_norms(integers(ctx.A()), 7 * 78 + 10);
  c.expect(truth.at(5) == 5, "oracle norm_A(5) != 5; ");
  const auto w = find_witness(ctx);
  c.expect(w.g_n == Group::integer_line().integer(5) && w.norm_A == 5, "witness is not 5 with norm 5; ");

  std::size_t members = 0;
  for (const auto& [x, d] : truth) {
    if (d > 2) continue;
    ++members;
    c.expect(truth.at(5 + x) <= 5, "an element of B_{A,2}(5) has norm > 5; ");
  }
  const auto r = verify_construction(w, ctx);
  c.expect(r.passed, "verify_construction failed; ");
  c.expect(r.checks.size() == members, "ball B_{A,2}(5) size mismatch; ");
  c.expect(r.depth_g_n.kind != DepthValue::Kind::Finite || r.depth_g_n.value >= 3, "depth(5) < 3; ");
  c.why << "|A|=" << ctx.A().size() << ", |B_{A,2}(5)|=" << members << ", depth(5)=" << r.depth_g_n.to_string();
}

void criterion2(Check& c) {
  const auto ctx = integer_context(10, 3, BoundMode::Tight);
  c.expect(ctx.params().N == 38, "tight N != 38; ");
  const auto r = verify_construction(find_witness(ctx), ctx);
  c.expect(r.passed, "verification failed under N=38; ");
  c.expect(radius_inequality_holds(5, 2, 38), "inequality fails at N=38; ");
  c.expect(radius_inequality_holds(5, 2, 78), "inequality fails at N=78; ");
  c.expect(!radius_inequality_holds(5, 2, 37), "inequality holds at N=37; ");
  c.why << "|A|=" << ctx.A().size() << ", checks=" << r.checks.size() << ", depth(5)=" << r.depth_g_n.to_string();
}

void criterion3(Check& c) {
  const auto ctx = integer_context(10, 3, BoundMode::Paper);
  const auto& p = ctx.params();
  const Group Z = Group::integer_line();
  const auto w = find_witness(ctx);
  const auto truth = oracle::integer_norms(integers(ctx.A()), 7 * 78 + 10);
  const Ball s_ball = build_ball(ctx.S(), p.n + p.d * static_cast<std::uint32_t>(p.N));

  std::size_t issued = 0, valid = 0;
  for (const auto& [x, d] : truth) {
    if (d > 2) continue;
    const Element g = Z.integer(5 + x);
    ++issued;
    try {
      const auto cert = factorize(g, ctx, s_ball.geodesic(g));
      bool ok = validate_certificate(cert, ctx).ok && !cert.degenerate && cert.k >= p.n - p.d;
      Element product = Z.identity();
      for (std::size_t i = 0; i < cert.k; ++i) {
        product = Z.multiply(product, cert.factors[i]);
        const auto t = ctx.pi().target_gens().letter_element(cert.t_word[i]);
        ok = ok && ctx.pi().apply(cert.factors[i]) == t;
        ok = ok && static_cast<std::uint64_t>(std::abs(cert.factors[i][0])) <= p.N;  // |v|_S = |v| in Z
      }
      ok = ok && product == g && truth.at(g[0]) <= cert.k;
      valid += ok ? 1 : 0;
    } catch (const Error&) {
    }
  }
  c.expect(issued > 0 && valid == issued, "some certificates failed; ");
  c.why << valid << "/" << issued << " certificates valid";
}

std::vector<GeneratingSet> random_table_groups(std::size_t count) {
  std::mt19937_64 rng(20240611);
  std::vector<GeneratingSet> out;
  while (out.size() < count) {
    const std::uint32_t degree = 3 + rng() % 4;
    const std::size_t ngens = 1 + rng() % 3;
    std::vector<std::vector<std::uint32_t>> perms;
    for (std::size_t i = 0; i < ngens; ++i) {
      std::vector<std::uint32_t> p(degree);
      for (std::uint32_t k = 0; k < degree; ++k) p[k] = k;
      std::shuffle(p.begin(), p.end(), rng);
      perms.push_back(p);
    }
    std::vector<std::uint32_t> ids;
    MultiplicationTable table;
    try {
      table = table_from_permutations(perms, 64, &ids);
    } catch (const Error&) {
      continue;  // closure above 64
    }
    if (table.order < 2) continue;
    const Group g = Group::table(table);
    std::vector<Element> gens;
    for (auto id : ids) {
      const auto x = g.table_element(id);
      if (!g.is_identity(x) && std::find(gens.begin(), gens.end(), x) == gens.end()) gens.push_back(x);
    }
    out.emplace_back(g, gens);
  }
  return out;
}

void criterion4(Check& c) {
  std::vector<GeneratingSet> cases;
  for (std::int64_t m = 2; m <= 50; ++m) {
    const Group g = Group::cyclic(m);
    cases.push_back(GeneratingSet::parse(g, "1"));
    if (m > 2) cases.push_back(GeneratingSet::parse(g, "1,2"));  // 2 = 0 in C_2
  }
  for (std::int64_t m = 3; m <= 12; ++m) cases.push_back(GeneratingSet::parse(Group::dihedral(m), "r1,s0"));
  const auto tables = random_table_groups(20);
  cases.insert(cases.end(), tables.begin(), tables.end());

  std::size_t agree = 0, elements = 0;
  for (const auto& S : cases) {
    const auto oracle = depth_oracle(S);
    const auto radius = static_cast<std::uint32_t>(oracle.per_norm.size() - 1);
    const auto profile = depth_profile(build_ball(S, radius), kNoCap);
    const auto diff = compare_profiles(S.group(), profile, oracle);
    if (!diff) {
      ++agree;
    } else {
      c.expect(false, S.group().name() + ": " + *diff + "; ");
    }
    elements += profile.elements.size();
  }
  c.expect(agree == cases.size(), "");
  c.why << agree << "/" << cases.size() << " groups agree (" << elements << " elements, " << tables.size()
        << " table groups)";
}

void criterion5(Check& c) {
  const auto S = GeneratingSet::parse(Group::integer_line(), "1");
  constexpr std::int64_t kMax = 59049;  // 3^10
  const auto family = QuotientFamily::cyclic(S, 2, kMax);
  std::size_t checked = 0;
  for (std::size_t first = 0; first < family.size(); first += 4096) {
    const auto last = std::min(family.size(), first + 4096);
    const auto ds = family_diameters(family, first, last);
    for (std::size_t i = first; i < last; ++i) {
      const auto m = static_cast<std::int64_t>(family.order(i));
      const auto& r = ds[i - first];
      c.expect(r.has_value() && r->diameter == static_cast<std::uint32_t>(m / 2), "diameter != floor(m/2); ");
      // floor(m/2) >= log_3(m)  <=>  3^floor(m/2) >= m
      c.expect(r && counting_bound_check(*r, 1), "counting bound fails; ");
      ++checked;
    }
  }
  const auto safe = find_quotient(family, 5, SelectionMode::PaperSafe);
  c.expect(safe.report.order == 243 && safe.report.diameter == 121, "paper_safe did not pick C_243; ");
  const auto greedy = find_quotient(family, 5, SelectionMode::Greedy);
  c.expect(greedy.report.order == 10 && greedy.report.diameter == 5, "greedy did not pick C_10; ");
  c.why << checked << " quotients, paper_safe m=" << safe.report.order << " (n=" << safe.report.diameter
        << "), greedy m=" << greedy.report.order << " (n=" << greedy.report.diameter << ")";
}

void criterion6(Check& c) {
  const Group Z = Group::integer_line();
  const Ball b = build_ball(GeneratingSet::parse(Z, "1"), 200);
  std::size_t ones = 0;
  for (std::int64_t x = -200; x <= 200; ++x) ones += depth(b, Z.integer(x), kNoCap) == DepthValue::finite(1) ? 1 : 0;
  c.expect(ones == 401, "some |g| <= 200 has depth != 1; ");
  const Group c10 = Group::cyclic(10);
  const auto d5 = depth(build_ball(GeneratingSet::parse(c10, "1"), 5), c10.residue(5), kNoCap);
  c.expect(d5 == DepthValue::infinite(), "Cyclic(10) element 5 is not Infinite; ");
  c.why << ones << "/401 integers have depth 1, depth_C10(5)=" << d5.to_string();
}

void criterion7(Check& c) {
  c.expect(required_N(11, 3, BoundMode::Paper) == 66, "required_N(11,3) != 66; ");
  const auto ctx = integer_context(22, 4, BoundMode::Paper);
  const auto& p = ctx.params();
  c.expect(p.n == 11 && p.d == 3 && p.N == 66, "params are not n=11, d=3, N=66; ");
  const auto w = find_witness(ctx);
  c.expect(w.g_n == Group::integer_line().integer(11), "g_n != 11; ");
  const auto r = verify_construction(w, ctx);
  c.expect(r.passed, "verify_construction failed; ");
  c.expect(r.certified_depth == 4, "certified depth != 4; ");
  c.why << "|A|=" << ctx.A().size() << ", checks=" << r.checks.size() << ", depth(11)=" << r.depth_g_n.to_string();
}

void criterion8(Check& c) {
  const Group L = Group::lamplighter();
  const auto profile = depth_profile(build_ball(GeneratingSet::parse(L, "t,a"), 8), kNoCap);
  const auto truth = oracle::lamplighter_depths(8);
  c.expect(profile.max_finite.has_value() && *profile.max_finite == truth.max_finite,
           "profile and tuple oracle disagree on the maximum; ");
  c.expect(profile.infinite_count == 0 && profile.at_least_count == 0, "non-finite depth in an infinite group; ");
  c.expect(profile.max_finite == kLamplighterMaxDepthR8, "pinned value not reproduced; ");
  c.why << "max finite depth " << (profile.max_finite ? std::to_string(*profile.max_finite) : "none") << " (oracle "
        << truth.max_finite << ", pinned " << kLamplighterMaxDepthR8 << ") over " << profile.elements.size()
        << " elements";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
      {"Z onto C10, D=3, paper mode N=78", criterion1},
      {"Z onto C10, D=3, tight mode N=38", criterion2},
      {"certificates over B_{A,2}(5)", criterion3},
      {"depth_profile equals depth_oracle", criterion4},
      {"counting bound and quotient selection", criterion5},
      {"baseline depths in Z and C10", criterion6},
      {"Z onto C22, D=4, N=66", criterion7},
      {"lamplighter radius 8 regression", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %s: %s [%s] (%.2fs)\n", i + 1, c.ok ? "PASS" : "FAIL", criteria[i].first,
                c.why.str().c_str(), s);
    std::fflush(stdout);
    failed += c.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
