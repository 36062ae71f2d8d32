#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace cxg {

// The three parallel representation dimensions of a token.
enum class Dim : std::uint8_t { LEX = 0, SYN = 1, SEM = 2 };

inline constexpr int kNumDims = 3;
inline constexpr Dim kAllDims[kNumDims] = {Dim::LEX, Dim::SYN, Dim::SEM};

using FillerId = std::uint32_t;

// One slot filler: a dimension plus the id of an interned surface form.
struct Filler {
  Dim dim;
  FillerId id;

  auto operator<=>(const Filler&) const = default;
};

// Packed key for hash maps; filler ids stay well below 2^30.
constexpr std::uint32_t pack(Filler f) {
  return (static_cast<std::uint32_t>(f.dim) << 30) | f.id;
}

constexpr Filler unpack(std::uint32_t key) {
  return Filler{static_cast<Dim>(key >> 30), key & 0x3fffffffu};
}

constexpr std::uint64_t pack_pair(Filler left, Filler right) {
  return (static_cast<std::uint64_t>(pack(left)) << 32) | pack(right);
}

constexpr std::string_view dim_name(Dim d) {
  switch (d) {
    case Dim::LEX: return "LEX";
    case Dim::SYN: return "SYN";
    case Dim::SEM: return "SEM";
  }
  return "???";
}

inline std::optional<Dim> dim_from_name(std::string_view name) {
  if (name == "LEX") return Dim::LEX;
  if (name == "SYN") return Dim::SYN;
  if (name == "SEM") return Dim::SEM;
  return std::nullopt;
}

}  // namespace cxg
