#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "deadend/cayley.hpp"

namespace deadend {

// Binary ball file, little-endian:
//   magic "DEADBALL" | u32 schema version | 32-byte SHA-256 of (group, gens, R)
//   | u32 radius | u8 saturated | u64 count
//   then per element: u32 length, canonical encoding bytes, u32 distance,
//   u32 parent index, u32 parent slot.

inline constexpr std::uint32_t kBallFileVersion = 1;

/// Hex SHA-256 over the canonical JSON of the generating set (which embeds the
/// group) and the radius.
std::string ball_content_hash(const GeneratingSet& gens, std::uint32_t radius);

void save_ball(const std::filesystem::path& path, const Ball& ball);

/// Throws ParseError when the header does not match (gens, radius) or the
/// body is malformed.
Ball load_ball(const std::filesystem::path& path, const GeneratingSet& gens, std::uint32_t radius);

class BallCache {
 public:
  explicit BallCache(std::filesystem::path dir);

  std::filesystem::path path_for(const GeneratingSet& gens, std::uint32_t radius) const;

  /// Loads a cached ball or builds and stores one. `hit` reports which.
  Ball get_or_build(const GeneratingSet& gens, std::uint32_t radius, const Budget& budget, bool* hit = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace deadend
