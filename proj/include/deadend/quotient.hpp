#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deadend/cayley.hpp"
#include "deadend/group.hpp"
#include "deadend/word.hpp"

namespace deadend {

enum class EvalMode : std::uint8_t { Native, WordBased };

/// Surjection from the group generated by S onto a finite group.
///
/// Native maps are linear reductions onto Cyclic(m):
///   IntegerLine  x           -> c*x
///   IntegerGrid  (x_i)       -> sum c_i x_i
///   Cyclic(M)    x           -> c*x            (needs m | c*M)
///   Lamplighter  (lamps, k)  -> c_0*k + c_1*|lamps|   (needs m | 2*c_1)
///   Dihedral(M)  (r, s)      -> c*s            (needs m | 2*c)
/// all mod m. Word-based maps send S to arbitrary images and evaluate an
/// S-word for the argument.
class QuotientMap {
 public:
  static QuotientMap native(GeneratingSet source_gens, std::int64_t modulus, std::vector<std::int64_t> coefficients = {});
  static QuotientMap word_based(GeneratingSet source_gens, Group target, std::vector<Element> images);

  const GeneratingSet& source_gens() const noexcept { return source_gens_; }
  const Group& source() const noexcept { return source_gens_.group(); }
  const Group& target() const noexcept { return target_; }
  EvalMode mode() const noexcept { return mode_; }
  const std::vector<std::int64_t>& coefficients() const noexcept { return coefficients_; }
  /// pi(s_i), one per source generator.
  const std::vector<Element>& images() const noexcept { return images_; }

  /// Image of g. Word-based maps need a hint w with S.evaluate(w) == g.
  Element apply(const Element& g, const Word* hint = nullptr) const;
  /// Image of the element spelled by an S-word (valid in both modes).
  Element apply_word(const Word& w) const;

  /// T = pi(S) with identity and repeated images dropped, in S order.
  const GeneratingSet& target_gens() const noexcept { return target_gens_; }
  /// Least S index whose image is T entry t.
  std::uint32_t section(std::size_t t) const { return section_[t]; }
  /// T letter for an S letter, or nullopt when pi(s) is the identity.
  std::optional<Letter> image_letter(Letter s) const;

  bool is_surjective() const;
  /// "cyclic:10" for native maps (plus coefficients when not default),
  /// "words:<target>" otherwise.
  std::string describe() const;

 private:
  QuotientMap(GeneratingSet source_gens, Group target, EvalMode mode);
  void finish_images();

  GeneratingSet source_gens_;
  Group target_;
  EvalMode mode_;
  std::vector<std::int64_t> coefficients_;
  std::vector<Element> images_;
  GeneratingSet target_gens_;
  std::vector<std::uint32_t> section_;
  std::vector<std::optional<std::uint32_t>> t_index_of_s_;
};

/// Checks pi(xy) = pi(x)pi(y). Finite sources: exhaustive (word-based maps
/// are checked for well-definedness over the whole source). Infinite native
/// sources: `samples` random pairs. Infinite word-based sources: consistency
/// over the S-ball of radius `radius`. Returns a description of the first
/// failure.
std::optional<std::string> check_homomorphism(const QuotientMap& pi, std::uint64_t samples = 10'000,
                                              std::uint32_t radius = 8, std::uint64_t seed = 1);

struct DiameterReport {
  std::uint64_t order = 0;
  std::uint32_t diameter = 0;
  Element witness;
  std::vector<std::uint64_t> sphere_sizes;
};

/// Exact diameter of a finite group under `gens` by dense BFS. The witness is
/// the first element of maximal length in BFS order. Throws Error if gens do
/// not generate the group.
DiameterReport diameter(const GeneratingSet& gens);

/// (2a+1)^n >= m.
bool counting_bound_check(const DiameterReport& report, std::uint64_t a);

/// Ordered candidate quotients. Cyclic families are generated on demand.
class QuotientFamily {
 public:
  static QuotientFamily cyclic(GeneratingSet source_gens, std::int64_t min_m, std::int64_t max_m,
                               std::vector<std::int64_t> coefficients = {});
  static QuotientFamily from_list(std::vector<QuotientMap> maps);

  std::size_t size() const noexcept;
  std::uint64_t order(std::size_t i) const;
  QuotientMap at(std::size_t i) const;
  /// |S| of the source generating set.
  std::size_t source_rank() const noexcept { return source_gens_.size(); }

 private:
  explicit QuotientFamily(GeneratingSet source_gens) : source_gens_(std::move(source_gens)) {}

  GeneratingSet source_gens_;
  std::int64_t min_m_ = 0, max_m_ = -1;
  std::vector<std::int64_t> coefficients_;
  std::vector<QuotientMap> list_;
};

enum class SelectionMode : std::uint8_t { PaperSafe, Greedy };

struct QuotientChoice {
  QuotientMap map;
  DiameterReport report;
  std::size_t family_index;
};

/// PaperSafe: first surjective member of order >= (2|S|+1)^n'.
/// Greedy: first surjective member whose diameter under T is >= n'.
/// Non-surjective members are skipped. Throws Error if nothing qualifies.
QuotientChoice find_quotient(const QuotientFamily& family, std::uint32_t n_prime, SelectionMode mode);

/// Diameters of members [first, last) computed in parallel; nullopt for
/// members that are not surjective.
std::vector<std::optional<DiameterReport>> family_diameters(const QuotientFamily& family, std::size_t first, std::size_t last);

}  // namespace deadend
