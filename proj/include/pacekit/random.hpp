#pragma once

#include <cstdint>
#include <string_view>

namespace pacekit {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed) ^ mix64(tag + 0x632be59bd9b4e019ULL));
}

// FNV-1a, used to turn stream and campaign names into tags.
constexpr std::uint64_t hash_tag(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

enum class Stream : std::uint64_t {
  Traffic = 1,
  Admission = 2,
  Auction = 3,
  WinNoise = 4,
  Conversion = 5,
  Delay = 6,
};

// Counter-based generator: every draw is a pure function of (key, a, b), so a
// draw for request (minute, index) is the same no matter what else consumed
// randomness. That gives common random numbers across paired runs and keeps
// results identical across platforms (integer mixing only).
class RandomStream {
 public:
  constexpr RandomStream(std::uint64_t seed, Stream stream)
      : key_(derive_seed(seed, static_cast<std::uint64_t>(stream))) {}

  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t a, std::uint64_t b = 0) const {
    return mix64(mix64(key_ ^ mix64(a)) + b * 0xd1342543de82ef95ULL);
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  [[nodiscard]] constexpr double uniform(std::uint64_t a, std::uint64_t b = 0) const {
    return static_cast<double>(bits(a, b) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

}  // namespace pacekit
