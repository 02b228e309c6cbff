// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string_view>

namespace opforge {

/// Deterministic 64-bit generator: xoshiro256** seeded through splitmix64.
///
/// The standard library distributions are not bit-identical across
/// implementations, so everything randomized in this library draws from this
/// class instead. Equal seeds reproduce equal artifacts on every platform.
class SeededRng {
public:
  explicit SeededRng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : state_)
      word = splitmix64(x);
  }

  uint64_t next() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform value in [0, bound), unbiased via rejection.
  uint64_t below(uint64_t bound) {
    if (bound == 0)
      throw std::invalid_argument("SeededRng::below: bound must be nonzero");
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold)
        return r % bound;
    }
  }

  bool coin() { return (next() >> 63) != 0; }

  /// Child seed derived from (seed, salts...). Experiments use this to give
  /// every trial its own stream so cells can be reproduced independently.
  static uint64_t derive(uint64_t seed, std::initializer_list<uint64_t> salts) {
    uint64_t h = seed;
    for (uint64_t salt : salts) {
      h ^= salt + 0x9e3779b97f4a7c15ULL;
      h = splitmix64(h);
    }
    return h;
  }

  /// FNV-1a hash of a tag string, for mixing textual salts into derive().
  static uint64_t hash_tag(std::string_view tag) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

private:
  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  uint64_t state_[4];
};

} // namespace opforge
