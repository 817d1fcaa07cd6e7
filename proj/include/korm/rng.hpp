#pragma once

#include <cstdint>
#include <string_view>

namespace korm {

// Seeded splittable generator. A (master_seed, substream_id) pair is hashed
// into an independent splitmix64 state, so the draw sequence is a pure
// function of the pair and substreams never share state. Recorded in run
// metadata as "splitmix64/v1"; any change to the derivation bumps the id.
class RngStream {
 public:
  static constexpr std::string_view id = "splitmix64/v1";

  RngStream(std::uint64_t master_seed, std::uint64_t substream_id)
      : state_(mix(master_seed ^ mix(substream_id + kGamma))) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection-free scaling; bound > 0.
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace korm
