#include "deadend/quotient.hpp"

#include <exception>
#include <mutex>
#include <random>

#include <omp.h>

namespace deadend {

namespace {

std::int64_t reduce(__int128 v, std::int64_t m) {
  v %= m;
  if (v < 0) v += m;
  return static_cast<std::int64_t>(v);
}

std::vector<std::int64_t> default_coefficients(const Group& source, std::int64_t m) {
  switch (source.kind()) {
    case GroupKind::IntegerLine:
    case GroupKind::Cyclic: return {1};
    case GroupKind::IntegerGrid: {
      std::vector<std::int64_t> c(static_cast<std::size_t>(source.parameter()), 0);
      c[0] = 1;
      return c;
    }
    case GroupKind::Lamplighter: return {1, 0};
    case GroupKind::Dihedral:
      if (m % 2 != 0 && m != 1) throw ParseError("dihedral groups only map natively onto cyclic groups of order 1 or 2");
      return {m / 2};
    case GroupKind::Table: break;
  }
  throw ParseError("table groups have no native quotient map; give generator images instead");
}

void check_coefficients(const Group& source, std::int64_t m, const std::vector<std::int64_t>& c) {
  auto need = [&](std::size_t n) {
    if (c.size() != n) throw ParseError("native map onto cyclic:" + std::to_string(m) + " from " + source.name() + " needs " +
                                        std::to_string(n) + " coefficient(s)");
  };
  switch (source.kind()) {
    case GroupKind::IntegerLine: need(1); break;
    case GroupKind::IntegerGrid: need(static_cast<std::size_t>(source.parameter())); break;
    case GroupKind::Cyclic:
      need(1);
      if (reduce(static_cast<__int128>(c[0]) * source.parameter(), m) != 0) {
        throw ParseError("x -> c*x is not well defined from " + source.name() + " to cyclic:" + std::to_string(m));
      }
      break;
    case GroupKind::Lamplighter:
      need(2);
      if (reduce(static_cast<__int128>(c[1]) * 2, m) != 0) throw ParseError("lamp parity coefficient c must satisfy m | 2c");
      break;
    case GroupKind::Dihedral:
      need(1);
      if (reduce(static_cast<__int128>(c[0]) * 2, m) != 0) throw ParseError("reflection coefficient c must satisfy m | 2c");
      break;
    case GroupKind::Table: throw ParseError("table groups have no native quotient map");
  }
}

std::vector<std::uint64_t> slot_ids(const GeneratingSet& gens) {
  std::vector<std::uint64_t> ids;
  ids.reserve(gens.slot_count());
  for (std::size_t s = 0; s < gens.slot_count(); ++s) ids.push_back(gens.group().id_of(gens.slot(s)));
  return ids;
}

}  // namespace

QuotientMap::QuotientMap(GeneratingSet source_gens, Group target, EvalMode mode)
    : source_gens_(std::move(source_gens)), target_(target), mode_(mode), target_gens_(std::move(target), {}) {
  if (!target_.is_finite()) throw ParseError("quotient targets must be finite");
}

QuotientMap QuotientMap::native(GeneratingSet source_gens, std::int64_t modulus, std::vector<std::int64_t> coefficients) {
  QuotientMap q(std::move(source_gens), Group::cyclic(modulus), EvalMode::Native);
  if (coefficients.empty()) coefficients = default_coefficients(q.source(), modulus);
  check_coefficients(q.source(), modulus, coefficients);
  q.coefficients_ = std::move(coefficients);
  for (const auto& s : q.source_gens_.entries()) q.images_.push_back(q.apply(s));
  q.finish_images();
  return q;
}

QuotientMap QuotientMap::word_based(GeneratingSet source_gens, Group target, std::vector<Element> images) {
  QuotientMap q(std::move(source_gens), std::move(target), EvalMode::WordBased);
  if (images.size() != q.source_gens_.size()) throw ParseError("need exactly one image per source generator");
  for (const auto& x : images) q.target_.check_member(x);
  q.images_ = std::move(images);
  q.finish_images();
  return q;
}

void QuotientMap::finish_images() {
  std::vector<Element> t;
  std::vector<std::string> labels;
  t_index_of_s_.assign(images_.size(), std::nullopt);
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (target_.is_identity(images_[i])) continue;
    std::size_t j = 0;
    while (j < t.size() && !(t[j] == images_[i])) ++j;
    if (j == t.size()) {
      t.push_back(images_[i]);
      labels.push_back("pi(" + source_gens_.label(i) + ")");
      section_.push_back(static_cast<std::uint32_t>(i));
    }
    t_index_of_s_[i] = static_cast<std::uint32_t>(j);
  }
  target_gens_ = GeneratingSet(target_, std::move(t), std::move(labels));
}

Element QuotientMap::apply_word(const Word& w) const {
  Element acc = target_.identity();
  for (const auto& l : w) {
    if (l.generator >= images_.size()) throw ParseError("word letter out of range for the source generating set");
    acc = target_.multiply(acc, l.inverse ? target_.invert(images_[l.generator]) : images_[l.generator]);
  }
  return acc;
}

Element QuotientMap::apply(const Element& g, const Word* hint) const {
  source().check_member(g);
  if (hint && !(source_gens_.evaluate(*hint) == g)) {
    throw Error("word hint " + format_word(*hint) + " does not evaluate to " + source().format(g));
  }
  if (mode_ == EvalMode::WordBased) {
    if (!hint) throw Error("word-based quotient map needs a word for " + source().format(g));
    return apply_word(*hint);
  }
  const std::int64_t m = target_.parameter();
  const auto& p = g.payload();
  const auto& c = coefficients_;
  __int128 v = 0;
  switch (source().kind()) {
    case GroupKind::IntegerLine:
    case GroupKind::Cyclic: v = static_cast<__int128>(c[0]) * p[0]; break;
    case GroupKind::IntegerGrid:
      for (std::size_t i = 0; i < p.size(); ++i) v = reduce(v + static_cast<__int128>(c[i]) * p[i], m);
      break;
    case GroupKind::Lamplighter:
      v = static_cast<__int128>(c[0]) * p[0] + static_cast<__int128>(c[1]) * static_cast<std::int64_t>(p.size() - 1);
      break;
    case GroupKind::Dihedral: v = static_cast<__int128>(c[0]) * p[1]; break;
    case GroupKind::Table: throw Error("no native map from a table group");
  }
  return target_.residue(reduce(v, m));
}

std::optional<Letter> QuotientMap::image_letter(Letter s) const {
  if (s.generator >= t_index_of_s_.size()) throw ParseError("letter out of range");
  const auto& t = t_index_of_s_[s.generator];
  if (!t) return std::nullopt;
  return Letter{*t, s.inverse};
}

bool QuotientMap::is_surjective() const {
  const std::uint64_t m = *target_.order();
  std::vector<char> seen(m, 0);
  std::vector<std::uint64_t> queue{target_.id_of(target_.identity())};
  seen[queue[0]] = 1;
  const auto ids = slot_ids(target_gens_);
  for (std::size_t h = 0; h < queue.size(); ++h) {
    for (auto s : ids) {
      auto y = target_.multiply_ids(queue[h], s);
      if (!seen[y]) {
        seen[y] = 1;
        queue.push_back(y);
      }
    }
  }
  return queue.size() == m;
}

std::string QuotientMap::describe() const {
  if (mode_ == EvalMode::WordBased) return "words:" + target_.name();
  std::string out = target_.name();
  if (coefficients_ != default_coefficients(source(), target_.parameter())) {
    out += '/';
    for (std::size_t i = 0; i < coefficients_.size(); ++i) out += (i ? "," : "") + std::to_string(coefficients_[i]);
  }
  return out;
}

std::optional<std::string> check_homomorphism(const QuotientMap& pi, std::uint64_t samples, std::uint32_t radius,
                                              std::uint64_t seed) {
  const Group& src = pi.source();
  const Group& tgt = pi.target();
  const auto& gens = pi.source_gens();

  if (src.is_finite() && pi.mode() == EvalMode::WordBased) {
    // Well-definedness: every element of <S> must receive exactly one image.
    const std::uint64_t m = *src.order();
    std::vector<std::optional<Element>> image(m);
    const auto id = src.id_of(src.identity());
    image[id] = tgt.identity();
    std::vector<std::uint64_t> queue{id};
    const auto ids = slot_ids(gens);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const auto x = queue[h];
      for (std::size_t s = 0; s < ids.size(); ++s) {
        const auto y = src.multiply_ids(x, ids[s]);
        Element img = tgt.multiply(*image[x], pi.apply_word({Letter::from_slot(static_cast<std::uint32_t>(s))}));
        if (!image[y]) {
          image[y] = std::move(img);
          queue.push_back(y);
        } else if (!(*image[y] == img)) {
          return "images are not well defined at " + src.format(src.from_id(y));
        }
      }
    }
    return std::nullopt;
  }

  if (src.is_finite()) {
    const std::uint64_t m = *src.order();
    auto check = [&](std::uint64_t a, std::uint64_t b) -> std::optional<std::string> {
      Element x = src.from_id(a), y = src.from_id(b);
      if (!(pi.apply(src.multiply(x, y)) == tgt.multiply(pi.apply(x), pi.apply(y)))) {
        return "pi(xy) != pi(x)pi(y) at x=" + src.format(x) + ", y=" + src.format(y);
      }
      return std::nullopt;
    };
    if (m * m <= 4'000'000) {
      for (std::uint64_t a = 0; a < m; ++a)
        for (std::uint64_t b = 0; b < m; ++b)
          if (auto e = check(a, b)) return e;
      return std::nullopt;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, m - 1);
    for (std::uint64_t i = 0; i < samples; ++i)
      if (auto e = check(pick(rng), pick(rng))) return e;
    return std::nullopt;
  }

  if (pi.mode() == EvalMode::Native) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> len(0, 16);
    std::uniform_int_distribution<std::uint32_t> slot(0, static_cast<std::uint32_t>(gens.slot_count() - 1));
    auto random_element = [&] {
      Word w(len(rng));
      for (auto& l : w) l = Letter::from_slot(slot(rng));
      return gens.evaluate(w);
    };
    for (std::uint64_t i = 0; i < samples; ++i) {
      Element x = random_element(), y = random_element();
      if (!(pi.apply(src.multiply(x, y)) == tgt.multiply(pi.apply(x), pi.apply(y)))) {
        return "pi(xy) != pi(x)pi(y) at x=" + src.format(x) + ", y=" + src.format(y);
      }
    }
    return std::nullopt;
  }

  // Infinite word-based source: relations of length <= 2*radius+1 must hold.
  Ball ball = build_ball(gens, radius);
  std::vector<Element> image(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) image[i] = pi.apply_word(ball.geodesic_at(i));
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t s = 0; s < gens.slot_count(); ++s) {
      auto j = ball.index_of(src.multiply(ball.element(i), gens.slot(s)));
      if (!j) continue;
      const Element expect = tgt.multiply(image[i], pi.apply_word({Letter::from_slot(static_cast<std::uint32_t>(s))}));
      if (!(image[*j] == expect)) return "images are not well defined at " + src.format(ball.element(*j));
    }
  }
  return std::nullopt;
}

namespace {

// Dense BFS; nullopt when gens do not reach the whole group.
std::optional<DiameterReport> try_diameter(const GeneratingSet& gens, std::uint64_t* reached = nullptr) {
  const Group& group = gens.group();
  const auto order = group.order();
  if (!order) throw Error("diameter needs a finite group");
  const std::uint64_t m = *order;
  const auto ids = slot_ids(gens);
  constexpr std::uint32_t kUnseen = 0xffffffffu;
  std::vector<std::uint32_t> dist(m, kUnseen);
  std::vector<std::uint64_t> queue;
  queue.reserve(m);
  const auto id = group.id_of(group.identity());
  dist[id] = 0;
  queue.push_back(id);
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const auto x = queue[h];
    for (auto s : ids) {
      const auto y = group.multiply_ids(x, s);
      if (dist[y] == kUnseen) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  if (reached) *reached = queue.size();
  if (queue.size() != m) return std::nullopt;
  DiameterReport r;
  r.order = m;
  r.diameter = dist[queue.back()];
  r.sphere_sizes.assign(r.diameter + 1, 0);
  std::optional<std::uint64_t> witness;
  for (auto x : queue) {
    ++r.sphere_sizes[dist[x]];
    if (!witness && dist[x] == r.diameter) witness = x;
  }
  r.witness = group.from_id(*witness);
  return r;
}

}  // namespace

DiameterReport diameter(const GeneratingSet& gens) {
  std::uint64_t reached = 0;
  auto r = try_diameter(gens, &reached);
  if (!r) {
    throw Error("generators reach " + std::to_string(reached) + " of " + std::to_string(*gens.group().order()) +
                " elements of " + gens.group().name());
  }
  return std::move(*r);
}

bool counting_bound_check(const DiameterReport& report, std::uint64_t a) {
  const std::uint64_t base = 2 * a + 1;
  std::uint64_t power = 1;
  for (std::uint32_t i = 0; i < report.diameter; ++i) {
    if (power >= report.order) return true;
    power *= base;
  }
  return power >= report.order;
}

QuotientFamily QuotientFamily::cyclic(GeneratingSet source_gens, std::int64_t min_m, std::int64_t max_m,
                                      std::vector<std::int64_t> coefficients) {
  if (min_m < 1 || max_m < min_m) throw ParseError("cyclic family needs 1 <= min_m <= max_m");
  QuotientFamily f(std::move(source_gens));
  f.min_m_ = min_m;
  f.max_m_ = max_m;
  f.coefficients_ = std::move(coefficients);
  return f;
}

QuotientFamily QuotientFamily::from_list(std::vector<QuotientMap> maps) {
  if (maps.empty()) throw ParseError("quotient family must be nonempty");
  QuotientFamily f(maps.front().source_gens());
  for (const auto& q : maps) {
    if (!(q.source_gens() == f.source_gens_)) throw ParseError("family members must share the source generating set");
  }
  f.list_ = std::move(maps);
  return f;
}

std::size_t QuotientFamily::size() const noexcept {
  return list_.empty() ? static_cast<std::size_t>(max_m_ - min_m_ + 1) : list_.size();
}

std::uint64_t QuotientFamily::order(std::size_t i) const {
  if (i >= size()) throw Error("family index out of range");
  return list_.empty() ? static_cast<std::uint64_t>(min_m_) + i : *list_[i].target().order();
}

QuotientMap QuotientFamily::at(std::size_t i) const {
  if (i >= size()) throw Error("family index out of range");
  if (!list_.empty()) return list_[i];
  return QuotientMap::native(source_gens_, min_m_ + static_cast<std::int64_t>(i), coefficients_);
}

QuotientChoice find_quotient(const QuotientFamily& family, std::uint32_t n_prime, SelectionMode mode) {
  if (family.size() == 0) throw ParseError("quotient family must be nonempty");
  if (mode == SelectionMode::PaperSafe) {
    // m = (2a+1)^{n'}, saturating.
    const std::uint64_t base = 2 * family.source_rank() + 1;
    std::uint64_t target = 1;
    bool overflow = false;
    for (std::uint32_t i = 0; i < n_prime && !overflow; ++i) overflow = __builtin_mul_overflow(target, base, &target);
    if (!overflow) {
      for (std::size_t i = 0; i < family.size(); ++i) {
        if (family.order(i) < target) continue;
        QuotientMap q = family.at(i);
        if (!q.is_surjective()) continue;
        DiameterReport r = diameter(q.target_gens());
        if (r.diameter < n_prime) {
          throw VerificationError("counting argument violated: order " + std::to_string(r.order) + " but diameter " +
                                  std::to_string(r.diameter));
        }
        return {std::move(q), std::move(r), i};
      }
    }
    throw Error("no family member has order >= (2a+1)^n' for n' = " + std::to_string(n_prime));
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    QuotientMap q = family.at(i);
    if (!q.is_surjective()) continue;
    DiameterReport r = diameter(q.target_gens());
    if (r.diameter >= n_prime) return {std::move(q), std::move(r), i};
  }
  throw Error("quotient family exhausted before reaching diameter " + std::to_string(n_prime));
}

std::vector<std::optional<DiameterReport>> family_diameters(const QuotientFamily& family, std::size_t first, std::size_t last) {
  if (last > family.size() || first > last) throw Error("family range out of bounds");
  std::vector<std::optional<DiameterReport>> out(last - first);
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(last - first); ++i) {
    try {
      // The BFS doubles as the surjectivity test.
      out[static_cast<std::size_t>(i)] = try_diameter(family.at(first + static_cast<std::size_t>(i)).target_gens());
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace deadend
