#include "deadend/construction.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <mutex>

#include <omp.h>

#include "deadend/digest.hpp"
#include "deadend/json_io.hpp"

namespace deadend {

std::string_view bound_mode_name(BoundMode mode) { return mode == BoundMode::Paper ? "paper" : "tight"; }

BoundMode parse_bound_mode(std::string_view text) {
  if (text == "paper") return BoundMode::Paper;
  if (text == "tight") return BoundMode::Tight;
  throw ParseError("bound mode must be 'paper' or 'tight'");
}

std::uint32_t required_n(std::uint32_t d) {
  if (d < 1) throw ParseError("depth slack d must be >= 1");
  return 2 * d + 1;
}

std::uint64_t required_N(std::uint32_t n, std::uint32_t d, BoundMode mode) {
  if (d < 1 || n <= 2 * static_cast<std::uint64_t>(d)) {
    throw ParseError("radius bound needs n > 2d >= 2 (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
  }
  const __int128 nn = n, dd = d;
  const __int128 cross = 2 * nn * dd;
  const __int128 numerator = 2 * nn * nn + (mode == BoundMode::Paper ? cross : -cross) + 2 * nn - dd;
  const __int128 denominator = nn - 2 * dd;
  const __int128 N = (numerator + denominator - 1) / denominator;
  return static_cast<std::uint64_t>(std::max<__int128>(N, 1));
}

bool radius_inequality_holds(std::uint32_t n, std::uint32_t d, std::uint64_t N) {
  if (n <= d) throw ParseError("radius inequality needs n > d");
  // (n + dN)/(n - d) + 2n + 1 <= N  <=>  n + dN + (2n + 1)(n - d) <= N(n - d)
  const __int128 nn = n, dd = d, NN = N;
  return nn + dd * NN + (2 * nn + 1) * (nn - dd) <= NN * (nn - dd);
}

ConstructionParams ConstructionParams::for_target(std::uint32_t target_depth, std::uint32_t n, BoundMode mode) {
  if (target_depth < 2) throw ParseError("target depth must be >= 2");
  ConstructionParams p;
  p.target_depth = target_depth;
  p.d = target_depth - 1;
  p.n = n;
  p.mode = mode;
  if (n < required_n(p.d)) {
    throw ParseError("quotient diameter " + std::to_string(n) + " is too small for target depth " +
                     std::to_string(target_depth) + " (need n >= " + std::to_string(required_n(p.d)) + ")");
  }
  p.N = required_N(n, p.d, mode);
  return p;
}

void ConstructionParams::validate() const {
  if (d < 1 || target_depth != d + 1) throw ParseError("construction needs D = d + 1 >= 2");
  const auto need = required_N(n, d, mode);
  if (N < need) {
    throw ParseError("N = " + std::to_string(N) + " is below the " + std::string(bound_mode_name(mode)) + " bound " +
                     std::to_string(need));
  }
  if (!radius_inequality_holds(n, d, N)) {
    throw VerificationError("N = " + std::to_string(N) + " fails (n + dN)/(n - d) + 2n + 1 <= N");
  }
}

// ---------------------------------------------------------------------------

ConstructedGenSet build_generating_set(const QuotientMap& pi, const ConstructionParams& params, const Budget& budget,
                                       const BallCache* cache) {
  params.validate();
  if (!pi.is_surjective()) throw ParseError("quotient map is not surjective");
  if (params.N > budget.max_radius) throw BudgetExceeded("N exceeds the radius budget", 0);
  const auto radius = static_cast<std::uint32_t>(params.N);
  const GeneratingSet& S = pi.source_gens();
  auto s_ball = std::make_shared<const Ball>(cache ? cache->get_or_build(S, radius, budget) : build_ball(S, radius, budget));

  const Group& G = S.group();
  const Group& H = pi.target();
  std::vector<Element> t_set(pi.images());

  std::vector<Element> entries;
  std::vector<std::string> warnings;
  std::size_t dropped = 0;
  std::unordered_map<Element, std::size_t, ElementHash> listed;
  for (std::size_t i = 0; i < s_ball->size(); ++i) {
    const Element& x = s_ball->element(i);
    const Element image = pi.mode() == EvalMode::Native ? pi.apply(x) : pi.apply_word(s_ball->geodesic_at(i));
    if (std::find(t_set.begin(), t_set.end(), image) == t_set.end()) continue;
    if (G.is_identity(x)) {
      warnings.push_back("identity maps into pi(S) (image " + H.format(image) + "); excluded from A");
      continue;
    }
    if (S.find(x) < 0 && listed.contains(G.invert(x))) {
      ++dropped;
      continue;
    }
    listed.emplace(x, entries.size());
    entries.push_back(x);
  }
  for (const auto& s : S.entries()) {
    if (!listed.contains(s)) throw VerificationError("generator " + G.format(s) + " missing from A");
  }
  ConstructedGenSet out{GeneratingSet(G, std::move(entries)), pi, params, std::move(s_ball), std::move(warnings), dropped};
  return out;
}

// ---------------------------------------------------------------------------

PhiTable::PhiTable(const QuotientMap& pi) : pi_(pi) {
  const Group& H = pi.target();
  const auto& T = pi.target_gens();
  const std::uint64_t m = *H.order();
  constexpr std::uint32_t kUnseen = 0xffffffffu;
  dist_.assign(m, kUnseen);
  parent_.assign(m, kUnseen);
  parent_slot_.assign(m, 0);
  std::vector<std::uint64_t> slot_ids;
  for (std::size_t s = 0; s < T.slot_count(); ++s) slot_ids.push_back(H.id_of(T.slot(s)));
  std::vector<std::uint64_t> queue{H.id_of(H.identity())};
  dist_[queue[0]] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const auto x = queue[h];
    for (std::size_t s = 0; s < slot_ids.size(); ++s) {
      const auto y = H.multiply_ids(x, slot_ids[s]);
      if (dist_[y] == kUnseen) {
        dist_[y] = dist_[x] + 1;
        parent_[y] = static_cast<std::uint32_t>(x);
        parent_slot_[y] = static_cast<std::uint32_t>(s);
        max_length_ = std::max(max_length_, dist_[y]);
        queue.push_back(y);
      }
    }
  }
  if (queue.size() != m) throw ParseError("quotient map is not surjective");
}

std::uint32_t PhiTable::norm(const Element& h) const { return dist_[pi_.target().id_of(h)]; }

Word PhiTable::t_geodesic(const Element& h) const {
  Word w;
  for (auto x = pi_.target().id_of(h); dist_[x] != 0; x = parent_[x]) w.push_back(Letter::from_slot(parent_slot_[x]));
  std::reverse(w.begin(), w.end());
  return w;
}

Word PhiTable::lift(const Word& t_word) const {
  Word w;
  w.reserve(t_word.size());
  for (const auto& l : t_word) w.push_back({pi_.section(l.generator), l.inverse});
  return w;
}

Word PhiTable::phi(const Element& h) const { return lift(t_geodesic(h)); }

// ---------------------------------------------------------------------------

ConstructionContext make_context(ConstructedGenSet construction, const Budget& budget) {
  PhiTable phi(construction.pi);
  DiameterReport report = diameter(construction.pi.target_gens());
  if (report.diameter != construction.params.n) {
    throw ParseError("params.n = " + std::to_string(construction.params.n) + " but the quotient has diameter " +
                     std::to_string(report.diameter));
  }
  auto a_ball = std::make_shared<const Ball>(build_ball(construction.A, construction.params.n, budget));
  std::unordered_map<Element, std::int64_t, ElementHash> a_letter;
  const auto& A = construction.A;
  for (std::size_t i = 0; i < A.size(); ++i) {
    a_letter.emplace(A[i], static_cast<std::int64_t>(i + 1));
    a_letter.emplace(A.group().invert(A[i]), -static_cast<std::int64_t>(i + 1));
  }
  return ConstructionContext{std::move(construction), std::move(phi), std::move(report), std::move(a_ball), std::move(a_letter)};
}

DeadEndWitness find_witness(const ConstructionContext& ctx) {
  const auto& S = ctx.S();
  const Group& G = S.group();
  DeadEndWitness w;
  w.n = ctx.params().n;
  w.claimed_depth = ctx.params().d + 1;
  w.h_n = ctx.report.witness;
  w.s_word = ctx.phi.phi(w.h_n);
  w.g_n = S.evaluate(w.s_word);
  if (w.s_word.size() > w.n) throw VerificationError("lifted word for h_n is longer than n");
  if (!(ctx.pi().apply(w.g_n, &w.s_word) == w.h_n)) throw VerificationError("pi(g_n) != h_n");
  auto norm = ctx.a_ball->norm(w.g_n);
  if (!norm) throw VerificationError("|g_n|_A exceeds n = " + std::to_string(w.n) + " for g_n = " + G.format(w.g_n));
  if (*norm != w.n) {
    throw VerificationError("|g_n|_A = " + std::to_string(*norm) + " but the image bound forces n = " + std::to_string(w.n));
  }
  w.norm_A = *norm;
  return w;
}

// ---------------------------------------------------------------------------

Word Certificate::a_word() const {
  Word w;
  for (auto v : a_letters) w.push_back(Letter::from_signed(v));
  return w;
}

std::string Certificate::digest(const Group& group) const {
  Json j;
  j["target"] = element_to_json(group, target);
  j["s_word"] = word_to_json(s_word);
  j["k"] = std::to_string(k);
  j["t_word"] = word_to_json(t_word);
  Json pieces_json = Json::array(), factors_json = Json::array();
  for (const auto& u : pieces) pieces_json.push_back(word_to_json(u));
  for (const auto& v : factor_words) factors_json.push_back(word_to_json(v));
  j["pieces"] = std::move(pieces_json);
  j["factors"] = std::move(factors_json);
  j["a_word"] = word_to_json(a_word());
  return sha256_hex(j.dump());
}

namespace {

std::optional<std::int64_t> a_letter_of(const ConstructionContext& ctx, const Element& x) {
  auto it = ctx.a_letter.find(x);
  if (it == ctx.a_letter.end()) return std::nullopt;
  return it->second;
}

Word subword(const Word& w, std::size_t from, std::size_t len) {
  return Word(w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(from + len));
}

}  // namespace

Certificate factorize(const Element& g, const ConstructionContext& ctx, const Word& s_word) {
  const auto& S = ctx.S();
  const auto& pi = ctx.pi();
  const Group& G = S.group();
  const Group& H = pi.target();
  const auto& p = ctx.params();

  if (!(S.evaluate(s_word) == g)) throw Error("factorize: word " + format_word(s_word) + " does not spell " + G.format(g));
  const std::uint64_t max_len = p.n + static_cast<std::uint64_t>(p.d) * p.N;
  if (s_word.size() > max_len) {
    throw Error("factorize: word length " + std::to_string(s_word.size()) + " exceeds n + dN = " + std::to_string(max_len));
  }

  Certificate c;
  c.target = g;
  c.s_word = s_word;
  const Element image = pi.apply_word(s_word);
  c.k = ctx.phi.norm(image);
  if (c.k == 0) {
    c.degenerate = true;
    return c;
  }
  const std::size_t L = s_word.size();
  const std::size_t k = c.k;

  // u_1..u_k, as equal as possible, earlier pieces longer.
  std::size_t pos = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t len = L / k + (i < L % k ? 1 : 0);
    c.pieces.push_back(subword(s_word, pos, len));
    pos += len;
  }

  c.t_word = ctx.phi.t_geodesic(image);
  const auto& T = pi.target_gens();

  // w_i = phi(pi(u_1..u_i)^-1 t_1..t_i), i = 1..k-1
  Element prefix_image = H.identity();
  Element t_prefix = H.identity();
  for (std::size_t i = 0; i + 1 < k; ++i) {
    prefix_image = H.multiply(prefix_image, pi.apply_word(c.pieces[i]));
    t_prefix = H.multiply(t_prefix, T.letter_element(c.t_word[i]));
    c.lifts.push_back(ctx.phi.phi(H.multiply(H.invert(prefix_image), t_prefix)));
  }

  for (std::size_t i = 0; i < k; ++i) {
    Word v;
    if (i > 0) v = inverse_word(c.lifts[i - 1]);
    v = concat(v, c.pieces[i]);
    if (i + 1 < k) v = concat(v, c.lifts[i]);
    c.factors.push_back(S.evaluate(v));
    c.factor_words.push_back(std::move(v));
    auto a = a_letter_of(ctx, c.factors.back());
    c.a_letters.push_back(a.value_or(0));
  }

  auto check = validate_certificate(c, ctx);
  if (!check.ok) throw VerificationError("certificate for " + G.format(g) + " fails: " + check.failures.front());
  return c;
}

CertificateCheck validate_certificate(const Certificate& c, const ConstructionContext& ctx) {
  CertificateCheck out;
  auto fail = [&](std::string msg) {
    out.ok = false;
    out.failures.push_back(std::move(msg));
  };
  const auto& S = ctx.S();
  const auto& pi = ctx.pi();
  const auto& T = pi.target_gens();
  const Group& G = S.group();
  const Group& H = pi.target();
  const auto& p = ctx.params();

  if (!(S.evaluate(c.s_word) == c.target)) fail("s_word does not spell the target");
  const Element image = pi.apply_word(c.s_word);
  const std::uint32_t k = ctx.phi.norm(image);
  if (c.k != k) fail("k = " + std::to_string(c.k) + " but |pi(g)|_T = " + std::to_string(k));
  if (c.degenerate || k == 0) {
    if (!(c.degenerate && k == 0)) fail("degenerate flag disagrees with pi(g)");
    return out;
  }
  if (c.pieces.size() != k || c.t_word.size() != k || c.factors.size() != k || c.factor_words.size() != k ||
      c.a_letters.size() != k || c.lifts.size() + 1 != k) {
    fail("certificate arrays do not have k entries");
    return out;
  }

  // Pieces: concatenation, balanced lengths, |u_i| < (n + dN)/k + 1.
  Word joined;
  for (const auto& u : c.pieces) joined = concat(joined, u);
  if (joined != c.s_word) fail("pieces do not concatenate to s_word");
  const std::uint64_t bound_num = p.n + static_cast<std::uint64_t>(p.d) * p.N + k;  // k|u_i| < n + dN + k
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t expect = c.s_word.size() / k + (i < c.s_word.size() % k ? 1 : 0);
    if (c.pieces[i].size() != expect) fail("piece " + std::to_string(i + 1) + " is not balanced");
    if (static_cast<std::uint64_t>(k) * c.pieces[i].size() >= bound_num) {
      fail("piece " + std::to_string(i + 1) + " violates |u_i| < (n + dN)/k + 1");
    }
  }

  // t_1..t_k is a T-word for pi(g) of length |pi(g)|_T.
  std::vector<Element> t(k), Q(k + 1), P(k + 1);
  Q[0] = P[0] = H.identity();
  for (std::size_t i = 0; i < k; ++i) {
    if (c.t_word[i].generator >= T.size()) {
      fail("t_" + std::to_string(i + 1) + " is not a letter of T");
      return out;
    }
    t[i] = T.letter_element(c.t_word[i]);
    Q[i + 1] = H.multiply(Q[i], t[i]);
    P[i + 1] = H.multiply(P[i], pi.apply_word(c.pieces[i]));
  }
  if (!(Q[k] == image)) fail("t_1...t_k does not spell pi(g)");
  if (!(P[k] == image)) fail("pi(u_1...u_k) != pi(g)");

  // Lifts.
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const Element want = H.multiply(H.invert(P[i + 1]), Q[i + 1]);
    if (!(pi.apply_word(c.lifts[i]) == want)) fail("lift " + std::to_string(i + 1) + " has the wrong image");
    if (c.lifts[i].size() != ctx.phi.norm(want) || c.lifts[i].size() > p.n) {
      fail("lift " + std::to_string(i + 1) + " is not a minimal lift of length <= n");
    }
  }

  Element product = G.identity();
  for (std::size_t i = 0; i < k; ++i) {
    const std::string tag = "factor " + std::to_string(i + 1) + ": ";
    Word v;
    if (i > 0) v = inverse_word(c.lifts[i - 1]);
    v = concat(v, c.pieces[i]);
    if (i + 1 < k) v = concat(v, c.lifts[i]);
    if (v != c.factor_words[i]) fail(tag + "word is not w_{i-1}^-1 u_i w_i");
    if (!(S.evaluate(c.factor_words[i]) == c.factors[i])) fail(tag + "element does not match its word");
    product = G.multiply(product, c.factors[i]);

    // pi(v_i) = t_i, directly and by the two telescoping evaluations.
    if (!(pi.apply_word(c.factor_words[i]) == t[i])) fail(tag + "pi(v_i) != t_i");
    Element tele;
    if (i + 1 < k) {
      // t_{i-1}^-1..t_1^-1 pi(u_1..u_{i-1}) pi(u_i) pi(u_1..u_i)^-1 t_1..t_i
      tele = H.multiply(H.multiply(H.multiply(H.multiply(H.invert(Q[i]), P[i]), pi.apply_word(c.pieces[i])), H.invert(P[i + 1])),
                        Q[i + 1]);
    } else {
      // t_{k-1}^-1..t_1^-1 pi(u_1..u_{k-1}) pi(u_k) = t_{k-1}^-1..t_1^-1 pi(g) = t_k
      tele = H.multiply(H.multiply(H.invert(Q[i]), P[i]), pi.apply_word(c.pieces[i]));
      if (!(tele == H.multiply(H.invert(Q[i]), image))) fail(tag + "telescoping through pi(g) breaks");
    }
    if (!(tele == t[i])) fail(tag + "telescoping evaluation differs from t_i");

    // |v_i| <= |u_i| + 2n <= N, and v_i lies in A^{+-1}.
    if (c.factor_words[i].size() > c.pieces[i].size() + 2 * static_cast<std::size_t>(p.n)) fail(tag + "|v_i| > |u_i| + 2n");
    if (c.factor_words[i].size() > p.N) fail(tag + "|v_i| > N");
    auto norm = ctx.construction.s_ball->norm(c.factors[i]);
    if (!norm || *norm > p.N) fail(tag + "|v_i|_S > N");
    auto a = a_letter_of(ctx, c.factors[i]);
    if (!a) {
      fail(tag + G.format(c.factors[i]) + " is not in A^{+-1}");
    } else if (*a != c.a_letters[i]) {
      fail(tag + "recorded A letter is wrong");
    }
  }
  if (!(product == c.target)) fail("v_1...v_k != g");
  return out;
}

// ---------------------------------------------------------------------------

VerificationReport verify_construction(const DeadEndWitness& witness, const ConstructionContext& ctx, const Budget& budget) {
  const auto& S = ctx.S();
  const auto& A = ctx.A();
  const Group& G = S.group();
  const auto& p = ctx.params();

  VerificationReport r;
  r.params = p;
  r.g_n = witness.g_n;
  auto fail = [&](std::string msg) { r.failures.push_back(std::move(msg)); };

  auto gn_norm = ctx.a_ball->norm(witness.g_n);
  r.norm_A_g_n = gn_norm.value_or(0);
  if (!gn_norm || *gn_norm != p.n) fail("|g_n|_A != n");

  const Ball local = build_ball(A, p.d, budget);  // B_{A,d}(1); B_{A,d}(g_n) = g_n * B_{A,d}(1)

  // S-words of length <= n + dN: geodesics if the S-ball fits, else g_n's
  // lift followed by S-geodesics of the A letters.
  std::shared_ptr<const Ball> s_long;
  const std::uint64_t long_radius = p.n + static_cast<std::uint64_t>(p.d) * p.N;
  if (long_radius <= budget.max_radius) {
    Budget trial = budget;
    trial.max_elements = std::min<std::uint64_t>(budget.max_elements, 2'000'000);
    try {
      s_long = std::make_shared<const Ball>(build_ball(S, static_cast<std::uint32_t>(long_radius), trial));
    } catch (const BudgetExceeded&) {
      s_long.reset();
    }
  }
  r.word_source = s_long ? "s_geodesic" : "a_path";

  std::vector<ElementCheck> checks(local.size());
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(local.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    try {
      ElementCheck& ch = checks[i];
      ch.g = G.multiply(witness.g_n, local.element(i));
      ch.distance_from_witness = local.distance(i);
      ch.norm_A = ctx.a_ball->norm(ch.g);

      Word s_word;
      if (s_long) {
        s_word = s_long->geodesic(ch.g);
      } else {
        s_word = witness.s_word;
        for (const auto& l : local.geodesic_at(i)) {
          Word piece = ctx.construction.s_ball->geodesic(A[l.generator]);
          s_word = concat(s_word, l.inverse ? inverse_word(piece) : piece);
        }
      }

      std::string problem;
      try {
        Certificate cert = factorize(ch.g, ctx, s_word);
        ch.k = cert.k;
        if (cert.degenerate) {
          problem = "pi(g) is trivial (k = 0)";
        } else {
          ch.certificate_ok = true;
          ch.certificate_digest = cert.digest(G);
          if (ch.k > p.n) problem = "certificate has k > n";
          if (static_cast<std::int64_t>(ch.k) < static_cast<std::int64_t>(p.n) - p.d) problem = "k < n - d";
          if (ch.norm_A && *ch.norm_A > ch.k) problem = "BFS norm exceeds certificate length";
        }
      } catch (const VerificationError& e) {
        problem = e.what();
      }
      if (!ch.norm_A) problem += (problem.empty() ? "" : "; ") + std::string("|g|_A > n by BFS");
      ch.failure = std::move(problem);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  for (const auto& ch : checks) {
    if (!ch.failure.empty()) fail(G.format(ch.g) + ": " + ch.failure);
  }
  r.checks = std::move(checks);

  r.depth_g_n = depth(*ctx.a_ball, witness.g_n, 0xffffffffu);
  const bool depth_ok = r.depth_g_n.kind != DepthValue::Kind::Finite || r.depth_g_n.value >= p.d + 1;
  if (!depth_ok) fail("depth(g_n) = " + r.depth_g_n.to_string() + " < d + 1");

  r.passed = r.failures.empty();
  r.certified_depth = r.passed ? p.d + 1 : 0;
  return r;
}

}  // namespace deadend
