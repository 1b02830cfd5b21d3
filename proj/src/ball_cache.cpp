#include "deadend/ball_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "deadend/digest.hpp"
#include "deadend/json_io.hpp"

namespace deadend {

namespace {

constexpr char kMagic[8] = {'D', 'E', 'A', 'D', 'B', 'A', 'L', 'L'};

template <typename T>
void put(std::ostream& out, T v) {
  for (std::size_t b = 0; b < sizeof(T); ++b) out.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * b)) & 0xff));
}

template <typename T>
T get(std::istream& in) {
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    int c = in.get();
    if (c == EOF) throw ParseError("ball file truncated");
    v |= std::uint64_t(static_cast<unsigned char>(c)) << (8 * b);
  }
  return static_cast<T>(v);
}

std::array<unsigned char, 32> hex_to_bytes(const std::string& hex) {
  std::array<unsigned char, 32> out{};
  for (std::size_t i = 0; i < 32; ++i) out[i] = static_cast<unsigned char>(std::stoul(hex.substr(2 * i, 2), nullptr, 16));
  return out;
}

}  // namespace

std::string ball_content_hash(const GeneratingSet& gens, std::uint32_t radius) {
  Json j{{"gens", to_json(gens)}, {"radius", std::to_string(radius)}, {"schema", kSchemaVersion}};
  return sha256_hex(j.dump());
}

void save_ball(const std::filesystem::path& path, const Ball& ball) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write ball cache file " + tmp);
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kBallFileVersion);
    auto digest = hex_to_bytes(ball_content_hash(ball.gens(), ball.radius()));
    out.write(reinterpret_cast<const char*>(digest.data()), digest.size());
    put<std::uint32_t>(out, ball.radius());
    put<std::uint8_t>(out, ball.saturated() ? 1 : 0);
    put<std::uint64_t>(out, ball.size());
    for (std::size_t i = 0; i < ball.size(); ++i) {
      const auto enc = ball.element(i).encoding();
      put<std::uint32_t>(out, static_cast<std::uint32_t>(enc.size()));
      out.write(enc.data(), static_cast<std::streamsize>(enc.size()));
      put<std::uint32_t>(out, ball.distance(i));
      put<std::uint32_t>(out, ball.parent(i).index);
      put<std::uint32_t>(out, ball.parent(i).slot);
    }
    if (!out) throw Error("failed writing ball cache file " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Ball load_ball(const std::filesystem::path& path, const GeneratingSet& gens, std::uint32_t radius) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open ball file " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ParseError("not a ball file");
  if (get<std::uint32_t>(in) != kBallFileVersion) throw ParseError("unsupported ball file version");
  std::array<unsigned char, 32> digest{};
  if (!in.read(reinterpret_cast<char*>(digest.data()), digest.size())) throw ParseError("ball file truncated");
  if (digest != hex_to_bytes(ball_content_hash(gens, radius))) {
    throw ParseError("ball file " + path.string() + " was built for different inputs");
  }
  if (get<std::uint32_t>(in) != radius) throw ParseError("ball file radius mismatch");
  const bool saturated = get<std::uint8_t>(in) != 0;
  const auto count = get<std::uint64_t>(in);
  std::vector<Element> elements;
  std::vector<std::uint32_t> distance;
  std::vector<Ball::Parent> parent;
  elements.reserve(count);
  distance.reserve(count);
  parent.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = get<std::uint32_t>(in);
    if (len > (1u << 20)) throw ParseError("ball file element too large");
    std::string bytes(len, '\0');
    if (!in.read(bytes.data(), len)) throw ParseError("ball file truncated");
    elements.push_back(Element::decode(bytes));
    gens.group().check_member(elements.back());
    distance.push_back(get<std::uint32_t>(in));
    const auto pi = get<std::uint32_t>(in);
    const auto ps = get<std::uint32_t>(in);
    parent.push_back({pi, ps});
  }
  if (in.peek() != EOF) throw ParseError("trailing bytes in ball file");
  return restore_ball(gens, radius, std::move(elements), std::move(distance), std::move(parent), saturated);
}

BallCache::BallCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

std::filesystem::path BallCache::path_for(const GeneratingSet& gens, std::uint32_t radius) const {
  return dir_ / (ball_content_hash(gens, radius) + ".ball");
}

Ball BallCache::get_or_build(const GeneratingSet& gens, std::uint32_t radius, const Budget& budget, bool* hit) const {
  const auto path = path_for(gens, radius);
  if (std::filesystem::exists(path)) {
    if (hit) *hit = true;
    return load_ball(path, gens, radius);
  }
  if (hit) *hit = false;
  Ball b = build_ball(gens, radius, budget);
  save_ball(path, b);
  return b;
}

}  // namespace deadend
