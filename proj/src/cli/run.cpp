#include <chrono>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>

#include "deadend/ball_cache.hpp"
#include "deadend/cli.hpp"
#include "deadend/construction.hpp"
#include "deadend/depth.hpp"
#include "deadend/digest.hpp"
#include "deadend/quotient.hpp"

#ifndef DEADEND_VERSION
#define DEADEND_VERSION "0.0.0"
#endif

namespace deadend::cli {

namespace {

constexpr std::uint32_t kUnbounded = std::numeric_limits<std::uint32_t>::max();

std::string num(std::uint64_t v) { return std::to_string(v); }

std::int64_t parse_int(std::string_view text, const char* what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(std::string(text), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ParseError(std::string("bad ") + what + " '" + std::string(text) + "'");
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    auto piece = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ParseError(message);
}

Group config_group(const RunConfig& c) {
  require(!c.group.empty(), "--group is required");
  return load_group(c.group, c.int_bits);
}

GeneratingSet config_gens(const RunConfig& c) {
  require(!c.gens.empty(), "--gens is required");
  return GeneratingSet::parse(config_group(c), c.gens);
}

std::unique_ptr<BallCache> config_cache(const RunConfig& c) {
  if (c.cache_dir.empty()) return nullptr;
  return std::make_unique<BallCache>(c.cache_dir);
}

Ball config_ball(const RunConfig& c, const GeneratingSet& S, std::uint32_t radius) {
  if (auto cache = config_cache(c)) return cache->get_or_build(S, radius, c.budget());
  return build_ball(S, radius, c.budget());
}

Json depth_json(const DepthValue& v) {
  static const char* kinds[] = {"finite", "at_least", "infinite"};
  Json j;
  j["kind"] = kinds[static_cast<int>(v.kind)];
  j["text"] = v.to_string();
  if (v.kind != DepthValue::Kind::Infinite) j["value"] = num(v.value);
  return j;
}

Json strings(const Group& G, const std::vector<Element>& xs) {
  Json j = Json::array();
  for (const auto& x : xs) j.push_back(G.format(x));
  return j;
}

Json counts(std::span<const std::uint64_t> xs) {
  Json j = Json::array();
  for (auto x : xs) j.push_back(num(x));
  return j;
}

void write_csv(const std::string& path, const auto& writer) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  writer(f);
}

// ---------------------------------------------------------------------------
// Quotients

QuotientMap explicit_quotient(const RunConfig& c, const GeneratingSet& S) {
  if (!c.quotient_images.empty()) {
    require(!c.quotient_target.empty(), "--quotient-images needs --quotient-target");
    Group target = load_group(c.quotient_target, c.int_bits);
    std::vector<Element> images;
    for (const auto& lit : split(c.quotient_images, ';')) images.push_back(target.parse_element(lit));
    return QuotientMap::word_based(S, std::move(target), std::move(images));
  }
  std::string_view q = c.quotient;
  const auto colon = q.find(':');
  require(colon != std::string_view::npos, "--quotient must look like cyclic:m or cyclic:m/c1,c2");
  const auto kind = q.substr(0, colon);
  require(kind == "cyclic" || kind == "c", "only cyclic quotients are built in; use --quotient-images otherwise");
  auto rest = q.substr(colon + 1);
  std::vector<std::int64_t> coeffs;
  if (auto slash = rest.find('/'); slash != std::string_view::npos) {
    for (const auto& s : split(rest.substr(slash + 1), ',')) coeffs.push_back(parse_int(s, "coefficient"));
    rest = rest.substr(0, slash);
  }
  return QuotientMap::native(S, parse_int(rest, "modulus"), std::move(coeffs));
}

struct ChosenQuotient {
  QuotientMap map;
  std::optional<std::size_t> family_index;
};

ChosenQuotient choose_quotient(const RunConfig& c, const GeneratingSet& S, std::uint32_t n_prime) {
  const bool has_explicit = !c.quotient.empty() || !c.quotient_images.empty();
  require(has_explicit != !c.family.empty(), "give exactly one of --quotient, --quotient-images or --family");
  if (has_explicit) {
    QuotientMap map = explicit_quotient(c, S);
    if (auto bad = check_homomorphism(map)) throw ParseError("quotient is not a homomorphism: " + *bad);
    require(map.is_surjective(), "quotient map is not surjective");
    return {std::move(map), std::nullopt};
  }
  require(c.family == "cyclic", "only the cyclic family is built in");
  auto family = QuotientFamily::cyclic(S, c.min_m, c.max_m);
  const auto mode = c.quotient_mode == "paper-safe" ? SelectionMode::PaperSafe : SelectionMode::Greedy;
  auto choice = find_quotient(family, n_prime, mode);
  return {std::move(choice.map), choice.family_index};
}

// ---------------------------------------------------------------------------
// Commands. Each returns {inputs, results, exit code}.

struct Outcome {
  Json inputs;
  Json results;
  int code = kOk;
};

Json base_inputs(const RunConfig& c, const GeneratingSet& S) {
  Json j;
  j["generating_set"] = to_json(S);
  j["group_spec"] = c.group;
  j["int_bits"] = num(static_cast<std::uint64_t>(c.int_bits));
  return j;
}

Json budget_json(const RunConfig& c) {
  Json j;
  j["elements"] = num(c.budget_elements);
  j["radius"] = num(c.budget_radius);
  j["seconds"] = c.budget_seconds;
  return j;
}

Outcome cmd_ball(const RunConfig& c) {
  require(c.radius.has_value(), "ball needs --radius");
  const auto S = config_gens(c);
  const Ball ball = config_ball(c, S, *c.radius);
  write_csv(c.csv, [&](std::ostream& f) { write_norm_csv(f, ball); });
  Outcome o;
  o.inputs = base_inputs(c, S);
  o.inputs["radius"] = num(*c.radius);
  o.results["size"] = num(ball.size());
  o.results["saturated"] = ball.saturated();
  o.results["sphere_sizes"] = counts(ball.sphere_sizes());
  o.results["content_hash"] = ball_content_hash(S, *c.radius);
  return o;
}

Outcome cmd_depth(const RunConfig& c) {
  require(!c.element.empty(), "depth needs --element");
  const auto S = config_gens(c);
  const Element g = S.group().parse_element(c.element);
  std::optional<Ball> ball;
  if (c.radius) {
    ball.emplace(config_ball(c, S, *c.radius));
    require(ball->contains(g), "element " + c.element + " lies outside the ball of radius " + num(*c.radius));
  } else {
    // Any radius >= |g| gives the exact depth; grow until g is inside.
    const std::uint32_t limit = c.budget().max_radius;
    for (std::uint32_t r = 1;; r = r > limit / 2 ? limit : 2 * r) {
      ball.emplace(config_ball(c, S, r));
      if (ball->contains(g)) break;
      if (ball->saturated() || r == limit) throw BudgetExceeded("element not reached within the radius budget", r);
    }
  }
  const DepthValue v = depth(*ball, g, c.cap.value_or(kUnbounded));
  Outcome o;
  o.inputs = base_inputs(c, S);
  o.inputs["element"] = S.group().format(g);
  if (c.cap) o.inputs["cap"] = num(*c.cap);
  o.results["element"] = S.group().format(g);
  o.results["norm"] = num(*ball->norm(g));
  o.results["depth"] = depth_json(v);
  return o;
}

Outcome cmd_profile(const RunConfig& c) {
  require(c.radius.has_value(), "profile needs --radius");
  const auto S = config_gens(c);
  const Ball ball = config_ball(c, S, *c.radius);
  const auto cap = c.cap.value_or(kUnbounded);
  const DepthProfile p = depth_profile(ball, cap);
  write_csv(c.csv, [&](std::ostream& f) { write_depth_csv(f, S.group(), p); });
  Outcome o;
  o.inputs = base_inputs(c, S);
  o.inputs["radius"] = num(*c.radius);
  if (c.cap) o.inputs["cap"] = num(*c.cap);
  o.results["elements"] = num(p.elements.size());
  o.results["max_finite_depth"] = p.max_finite ? Json(num(*p.max_finite)) : Json(nullptr);
  o.results["at_least_count"] = num(p.at_least_count);
  o.results["infinite_count"] = num(p.infinite_count);
  Json rows = Json::array();
  for (const auto& s : p.per_norm) {
    Json r;
    r["norm"] = num(s.norm);
    r["elements"] = num(s.elements);
    r["max_finite_depth"] = s.max_finite ? Json(num(*s.max_finite)) : Json(nullptr);
    r["at_least"] = num(s.at_least);
    r["infinite"] = num(s.infinite);
    rows.push_back(std::move(r));
  }
  o.results["per_norm"] = std::move(rows);
  return o;
}

Outcome cmd_diameter(const RunConfig& c) {
  const auto S = config_gens(c);
  const DiameterReport r = diameter(S);
  Outcome o;
  o.inputs = base_inputs(c, S);
  o.results["order"] = num(r.order);
  o.results["diameter"] = num(r.diameter);
  o.results["witness"] = S.group().format(r.witness);
  o.results["sphere_sizes"] = counts(r.sphere_sizes);
  o.results["counting_bound"] = counting_bound_check(r, S.size());
  return o;
}

struct Built {
  ConstructionContext ctx;
  Json inputs;
  Json quotient;
};

Built build_context(const RunConfig& c, const GeneratingSet& S) {
  require(c.target_depth >= 2, "--target-depth D >= 2 is required");
  const auto mode = parse_bound_mode(c.bound_mode);
  const auto budget = c.budget();
  auto chosen = choose_quotient(c, S, required_n(c.target_depth - 1));
  const DiameterReport rep = diameter(chosen.map.target_gens());
  const auto params = ConstructionParams::for_target(c.target_depth, rep.diameter, mode);
  auto cache = config_cache(c);
  auto construction = build_generating_set(chosen.map, params, budget, cache.get());

  Json inputs = base_inputs(c, S);
  inputs["quotient"] = c.quotient;
  inputs["quotient_target"] = c.quotient_target;
  inputs["quotient_images"] = c.quotient_images;
  inputs["family"] = c.family;
  inputs["min_m"] = num(static_cast<std::uint64_t>(c.min_m));
  inputs["max_m"] = num(static_cast<std::uint64_t>(c.max_m));
  inputs["quotient_mode"] = c.quotient_mode;
  inputs["target_depth"] = num(c.target_depth);
  inputs["bound_mode"] = c.bound_mode;
  inputs["budget"] = budget_json(c);

  Json q;
  q["map"] = chosen.map.describe();
  q["order"] = num(rep.order);
  q["diameter"] = num(rep.diameter);
  q["witness"] = chosen.map.target().format(rep.witness);
  q["family_index"] = chosen.family_index ? Json(num(*chosen.family_index)) : Json(nullptr);
  q["generators"] = strings(chosen.map.target(), chosen.map.target_gens().entries());
  return {make_context(std::move(construction), budget), std::move(inputs), std::move(q)};
}

Json params_json(const ConstructionParams& p) {
  Json j;
  j["target_depth"] = num(p.target_depth);
  j["d"] = num(p.d);
  j["n"] = num(p.n);
  j["N"] = num(p.N);
  j["bound_mode"] = std::string(bound_mode_name(p.mode));
  j["required_N_paper"] = num(required_N(p.n, p.d, BoundMode::Paper));
  j["required_N_tight"] = num(required_N(p.n, p.d, BoundMode::Tight));
  j["radius_inequality"] = radius_inequality_holds(p.n, p.d, p.N);
  return j;
}

Json construction_results(const Built& b, const RunConfig& c) {
  const auto& ctx = b.ctx;
  const Group& G = ctx.S().group();
  const DeadEndWitness w = find_witness(ctx);
  const VerificationReport r = verify_construction(w, ctx, c.budget());

  Json j;
  j["params"] = params_json(ctx.params());
  j["quotient"] = b.quotient;
  Json a;
  a["size"] = num(ctx.A().size());
  a["entries"] = strings(G, ctx.A().entries());
  a["dropped_inverses"] = num(ctx.construction.dropped_inverses);
  a["warnings"] = ctx.construction.warnings;
  j["generating_set"] = std::move(a);
  Json wj;
  wj["g_n"] = G.format(w.g_n);
  wj["h_n"] = ctx.pi().target().format(w.h_n);
  wj["s_word"] = format_word(w.s_word);
  wj["norm_A"] = num(w.norm_A);
  j["witness"] = std::move(wj);
  Json v;
  v["passed"] = r.passed;
  v["certified_depth"] = num(r.certified_depth);
  v["depth_g_n"] = depth_json(r.depth_g_n);
  v["word_source"] = r.word_source;
  Json rows = Json::array();
  for (const auto& ch : r.checks) {
    Json row;
    row["element"] = G.format(ch.g);
    row["distance"] = num(ch.distance_from_witness);
    row["norm_A"] = ch.norm_A ? Json(num(*ch.norm_A)) : Json(nullptr);
    row["k"] = num(ch.k);
    row["certificate"] = ch.certificate_digest;
    row["ok"] = ch.failure.empty();
    if (!ch.failure.empty()) row["failure"] = ch.failure;
    rows.push_back(std::move(row));
  }
  v["checks"] = std::move(rows);
  auto failures = r.failures;
  std::sort(failures.begin(), failures.end());
  v["failures"] = failures;
  j["verification"] = std::move(v);
  j["passed"] = r.passed;
  return j;
}

Outcome cmd_construct(const RunConfig& c, const GeneratingSet& S) {
  const Built b = build_context(c, S);
  Outcome o;
  o.inputs = b.inputs;
  o.results = construction_results(b, c);
  if (!c.csv.empty()) {
    write_csv(c.csv, [&](std::ostream& f) {
      f << "element,distance,norm_A,k,ok\n";
      for (const auto& row : o.results["verification"]["checks"]) {
        f << row["element"].get<std::string>() << ',' << row["distance"].get<std::string>() << ','
          << (row["norm_A"].is_null() ? std::string() : row["norm_A"].get<std::string>()) << ','
          << row["k"].get<std::string>() << ',' << (row["ok"].get<bool>() ? 1 : 0) << '\n';
      }
    });
  }
  o.code = o.results["passed"].get<bool>() ? kOk : kVerification;
  return o;
}

Outcome cmd_certify(const RunConfig& c) {
  require(!c.element.empty(), "certify needs --element");
  const auto S = config_gens(c);
  const Built b = build_context(c, S);
  const auto& ctx = b.ctx;
  const Group& G = S.group();
  const auto& p = ctx.params();
  const Element g = G.parse_element(c.element);

  Word s_word;
  if (!c.word.empty()) {
    s_word = parse_word(c.word);
  } else {
    const std::uint64_t r = p.n + static_cast<std::uint64_t>(p.d) * p.N;
    require(r <= c.budget().max_radius, "n + dN exceeds the radius budget; pass --word");
    const Ball ball = config_ball(c, S, static_cast<std::uint32_t>(r));
    require(ball.contains(g), "element is farther than n + dN from the identity in S");
    s_word = ball.geodesic(g);
  }

  Outcome o;
  o.inputs = b.inputs;
  o.inputs["element"] = G.format(g);
  o.inputs["word"] = format_word(s_word);
  o.results["params"] = params_json(p);
  o.results["element"] = G.format(g);
  const auto norm = ctx.a_ball->norm(g);
  o.results["norm_A"] = norm ? Json(num(*norm)) : Json(nullptr);
  try {
    const Certificate cert = factorize(g, ctx, s_word);
    Json j;
    j["k"] = num(cert.k);
    j["degenerate"] = cert.degenerate;
    Json pieces = Json::array(), lifts = Json::array(), factors = Json::array();
    for (const auto& u : cert.pieces) pieces.push_back(format_word(u));
    for (const auto& wl : cert.lifts) lifts.push_back(format_word(wl));
    for (std::size_t i = 0; i < cert.factors.size(); ++i) {
      Json f;
      f["element"] = G.format(cert.factors[i]);
      f["word"] = format_word(cert.factor_words[i]);
      f["a_letter"] = std::to_string(cert.a_letters[i]);
      factors.push_back(std::move(f));
    }
    j["pieces"] = std::move(pieces);
    j["lifts"] = std::move(lifts);
    j["t_word"] = format_word(cert.t_word);
    j["factors"] = std::move(factors);
    j["a_word"] = format_word(cert.a_word());
    j["digest"] = cert.digest(G);
    const auto check = validate_certificate(cert, ctx);
    j["valid"] = check.ok && !cert.degenerate;
    o.results["certificate"] = std::move(j);
    if (norm && !cert.degenerate && *norm > cert.k) throw VerificationError("BFS norm exceeds the certificate length");
    o.results["passed"] = check.ok && !cert.degenerate;
  } catch (const VerificationError& e) {
    o.results["certificate"] = nullptr;
    o.results["failure"] = e.what();
    o.results["passed"] = false;
  }
  o.code = o.results["passed"].get<bool>() ? kOk : kVerification;
  return o;
}

std::string first_difference(const Json& a, const Json& b, const std::string& path = "") {
  if (a == b) return {};
  if (a.is_object() && b.is_object()) {
    for (const auto& [key, value] : a.items()) {
      if (!b.contains(key)) return path + "/" + key;
      if (auto d = first_difference(value, b.at(key), path + "/" + key); !d.empty()) return d;
    }
    for (const auto& [key, value] : b.items()) {
      if (!a.contains(key)) return path + "/" + key;
    }
  }
  if (a.is_array() && b.is_array() && a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (auto d = first_difference(a[i], b[i], path + "/" + std::to_string(i)); !d.empty()) return d;
    }
  }
  return path.empty() ? "/" : path;
}

Outcome cmd_verify(const RunConfig& c) {
  require(!c.input.empty(), "verify needs --input");
  std::ifstream f(c.input);
  require(static_cast<bool>(f), "cannot read " + c.input);
  Json stored;
  try {
    stored = Json::parse(f);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("report is not JSON: ") + e.what());
  }
  require(stored.value("schema", "") == kSchemaVersion, "report schema is not " + std::string(kSchemaVersion));
  require(stored.value("command", "") == "construct", "verify re-checks construct reports only");
  const Json& in = stored.at("inputs");

  RunConfig r;
  r.command = "construct";
  r.group = in.at("group_spec").get<std::string>();
  r.int_bits = static_cast<int>(parse_int(in.at("int_bits").get<std::string>(), "int_bits"));
  r.quotient = in.at("quotient").get<std::string>();
  r.quotient_target = in.at("quotient_target").get<std::string>();
  r.quotient_images = in.at("quotient_images").get<std::string>();
  r.family = in.at("family").get<std::string>();
  r.min_m = parse_int(in.at("min_m").get<std::string>(), "min_m");
  r.max_m = parse_int(in.at("max_m").get<std::string>(), "max_m");
  r.quotient_mode = in.at("quotient_mode").get<std::string>();
  r.target_depth = static_cast<std::uint32_t>(parse_int(in.at("target_depth").get<std::string>(), "target_depth"));
  r.bound_mode = in.at("bound_mode").get<std::string>();
  r.budget_elements = static_cast<std::uint64_t>(parse_int(in.at("budget").at("elements").get<std::string>(), "budget"));
  r.budget_radius = static_cast<std::uint32_t>(parse_int(in.at("budget").at("radius").get<std::string>(), "budget"));
  r.budget_seconds = in.at("budget").at("seconds").get<double>();
  r.cache_dir = c.cache_dir;
  const GeneratingSet S = gens_from_json(in.at("generating_set"));

  const Outcome again = cmd_construct(r, S);
  Outcome o;
  o.inputs["report"] = stored.at("inputs_digest");
  o.results["inputs_digest_ok"] = stored.at("inputs_digest") == sha256_hex(in.dump());
  o.results["inputs_match"] = again.inputs == in;
  const auto diff = first_difference(again.results, stored.at("results"));
  o.results["results_match"] = diff.empty();
  if (!diff.empty()) o.results["first_difference"] = diff;
  o.results["construction_passed"] = again.results["passed"];
  const bool ok = o.results["inputs_digest_ok"].get<bool>() && o.results["inputs_match"].get<bool>() && diff.empty() &&
                  again.results["passed"].get<bool>();
  o.results["passed"] = ok;
  o.code = ok ? kOk : kVerification;
  return o;
}

Outcome dispatch(const RunConfig& c) {
  if (c.command == "ball") return cmd_ball(c);
  if (c.command == "depth") return cmd_depth(c);
  if (c.command == "profile") return cmd_profile(c);
  if (c.command == "diameter") return cmd_diameter(c);
  if (c.command == "construct") return cmd_construct(c, config_gens(c));
  if (c.command == "certify") return cmd_certify(c);
  if (c.command == "verify") return cmd_verify(c);
  throw ParseError("unknown command '" + c.command + "'");
}

}  // namespace

Json make_report(const std::string& command, Json inputs, Json results, double seconds) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["inputs_digest"] = sha256_hex(inputs.dump());
  j["inputs"] = std::move(inputs);
  j["results"] = std::move(results);
  j["timing"] = {{"seconds", seconds}};
  j["version"] = DEADEND_VERSION;
  return j;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = dispatch(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const Json report = make_report(config.command, std::move(o.inputs), std::move(o.results), seconds);
    const std::string text = report.dump(2) + "\n";
    if (config.out.empty()) {
      out << text;
    } else {
      std::ofstream f(config.out, std::ios::binary);
      if (!f) throw ParseError("cannot write " + config.out);
      f << text;
      out << config.command << ": " << (o.code == kOk ? "ok" : "FAILED") << " -> " << config.out << '\n';
    }
    return o.code;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << " (complete radius " << e.radius_reached() << ")\n";
    return kBudget;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerification;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  }
  return run(config, out, err);
}

}  // namespace deadend::cli
