#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "deadend/ball_cache.hpp"
#include "deadend/cayley.hpp"
#include "deadend/depth.hpp"
#include "deadend/quotient.hpp"

namespace deadend {

// Generating sets with a prescribed dead end.
//
// Given S generating G and a finite quotient pi: G -> H whose diameter under
// T = pi(S) is n, the set A = { x in B_{S,N}(1) : pi(x) in T } generates G,
// and any lift g_n of a longest element h_n of H has |g_n|_A = n. When
// n > 2d and N is large enough, every g within A-distance d of g_n
// factors as g = v_1...v_k with each v_i in A^{+-1} and k = |pi(g)|_T <= n,
// so g_n has depth at least d + 1.

enum class BoundMode : std::uint8_t { Paper, Tight };

std::string_view bound_mode_name(BoundMode mode);
BoundMode parse_bound_mode(std::string_view text);

/// Least n with n > 2d.
std::uint32_t required_n(std::uint32_t d);

/// Least integer N admitted by the radius bound:
///   Paper: ceil((2n^2 + 2nd + 2n - d) / (n - 2d))
///   Tight: ceil((2n^2 - 2nd + 2n - d) / (n - 2d))
/// Throws ParseError unless n > 2d >= 2.
std::uint64_t required_N(std::uint32_t n, std::uint32_t d, BoundMode mode);

/// (n + dN)/(n - d) + 2n + 1 <= N, evaluated exactly. Requires n > d.
bool radius_inequality_holds(std::uint32_t n, std::uint32_t d, std::uint64_t N);

struct ConstructionParams {
  std::uint32_t target_depth = 0;  // D
  std::uint32_t d = 0;             // D - 1
  std::uint32_t n = 0;             // quotient diameter
  std::uint64_t N = 0;             // radius of the S-ball
  BoundMode mode = BoundMode::Paper;

  /// d = D - 1 and N = required_N(n, d, mode).
  static ConstructionParams for_target(std::uint32_t target_depth, std::uint32_t n, BoundMode mode);
  /// Checks D = d + 1 >= 2, n > 2d, N >= required_N(n, d, mode) and the
  /// radius inequality.
  void validate() const;
};

struct ConstructedGenSet {
  GeneratingSet A;
  QuotientMap pi;
  ConstructionParams params;
  std::shared_ptr<const Ball> s_ball;  // B_{S,N}(1)
  std::vector<std::string> warnings;
  std::size_t dropped_inverses = 0;  // preimages skipped because their inverse is already in A

  const GeneratingSet& S() const noexcept { return pi.source_gens(); }
};

/// A = B_{S,N}(1) ∩ pi^{-1}(pi(S)) minus the identity, in BFS order. An
/// element whose inverse is already listed is skipped unless it lies in S
/// (metric code symmetrizes). Uses `cache` for the S-ball when given.
ConstructedGenSet build_generating_set(const QuotientMap& pi, const ConstructionParams& params, const Budget& budget,
                                       const BallCache* cache = nullptr);

/// Minimal lifts through pi: BFS on H with the letters of T, then each T
/// letter replaced by the S generator of least index mapping to it.
class PhiTable {
 public:
  explicit PhiTable(const QuotientMap& pi);

  const QuotientMap& pi() const noexcept { return pi_; }
  /// |h|_T.
  std::uint32_t norm(const Element& h) const;
  /// First-parent T-geodesic of h (letters index target_gens()).
  Word t_geodesic(const Element& h) const;
  /// S-word of length |h|_T whose image is h.
  Word phi(const Element& h) const;
  /// Replaces T letters by their canonical S letters.
  Word lift(const Word& t_word) const;
  /// Longest |h|_T, i.e. the diameter of H.
  std::uint32_t max_length() const noexcept { return max_length_; }

 private:
  QuotientMap pi_;
  std::vector<std::uint32_t> dist_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> parent_slot_;
  std::uint32_t max_length_ = 0;
};

/// Everything the witness search, factorization and verification share.
struct ConstructionContext {
  ConstructedGenSet construction;
  PhiTable phi;
  DiameterReport report;              // H under T
  std::shared_ptr<const Ball> a_ball;  // B_{A,n}(1)
  std::unordered_map<Element, std::int64_t, ElementHash> a_letter;  // x -> +-(i+1) for x = A_i^{+-1}

  const ConstructionParams& params() const noexcept { return construction.params; }
  const GeneratingSet& S() const noexcept { return construction.S(); }
  const GeneratingSet& A() const noexcept { return construction.A; }
  const QuotientMap& pi() const noexcept { return construction.pi; }
};

/// Computes the diameter report and the A-ball of radius n. Throws ParseError
/// when params.n differs from the diameter of H.
ConstructionContext make_context(ConstructedGenSet construction, const Budget& budget);

struct DeadEndWitness {
  Element g_n;
  Element h_n;
  Word s_word;  // lifted T-geodesic of h_n, length n
  std::uint32_t n = 0;
  std::uint32_t norm_A = 0;
  std::uint32_t claimed_depth = 0;  // d + 1
};

/// Lifts a T-geodesic of h_n through the canonical section and checks
/// pi(g_n) = h_n, |g_n|_S <= n and |g_n|_A = n. Throws VerificationError.
DeadEndWitness find_witness(const ConstructionContext& ctx);

struct Certificate {
  Element target;
  Word s_word;
  std::uint32_t k = 0;
  bool degenerate = false;  // pi(target) is the identity
  std::vector<Word> pieces;        // u_1..u_k
  Word t_word;                     // t_1..t_k over T
  std::vector<Word> lifts;         // phi(pi(u_1..u_i)^-1 t_1..t_i), i < k
  std::vector<Word> factor_words;  // v_i as S-words
  std::vector<Element> factors;    // v_i
  std::vector<std::int64_t> a_letters;  // v_i as a signed 1-based letter over A

  /// Certifies |target|_A <= k.
  Word a_word() const;
  std::string digest(const Group& group) const;
};

struct CertificateCheck {
  bool ok = true;
  std::vector<std::string> failures;  // "factor 3: ..." style messages
};

/// Splits s_word into k = |pi(g)|_T near-equal pieces (earlier pieces take
/// the extra letters) and assembles
///   v_1 = u_1 w_1,  v_i = w_{i-1}^-1 u_i w_i,  v_k = w_{k-1}^-1 u_k,
/// with w_i = phi(pi(u_1...u_i)^-1 t_1...t_i). Validates the result and
/// throws VerificationError naming the failing factor. Requires
/// S.evaluate(s_word) == g and |s_word| <= n + dN. A g with trivial image
/// yields a certificate with degenerate = true.
Certificate factorize(const Element& g, const ConstructionContext& ctx, const Word& s_word);

/// Independent re-check of every certificate invariant, including both
/// telescoping evaluations of pi(v_i).
CertificateCheck validate_certificate(const Certificate& cert, const ConstructionContext& ctx);

struct ElementCheck {
  Element g;
  std::uint32_t distance_from_witness = 0;
  std::optional<std::uint32_t> norm_A;  // from BFS; nullopt means > n
  std::uint32_t k = 0;
  bool certificate_ok = false;
  std::string certificate_digest;
  std::string failure;
};

struct VerificationReport {
  bool passed = false;
  ConstructionParams params;
  Element g_n;
  std::uint32_t norm_A_g_n = 0;
  std::uint32_t certified_depth = 0;  // d + 1 when passed
  DepthValue depth_g_n;
  std::string word_source;  // "s_geodesic" or "a_path"
  std::vector<ElementCheck> checks;
  std::vector<std::string> failures;
};

/// Enumerates B_{A,d}(g_n) and checks |g|_A <= n for every member both by
/// BFS and by a certificate with n - d <= k <= n, then cross-checks depth().
/// Element checks run in parallel; output order is the BFS order of the
/// local ball.
VerificationReport verify_construction(const DeadEndWitness& witness, const ConstructionContext& ctx,
                                       const Budget& budget = {});

}  // namespace deadend
