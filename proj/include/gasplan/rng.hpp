// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gasplan {

// All randomness in the project flows from one config seed. Child generators
// are derived with labeled splits so that adding a consumer never perturbs the
// streams of existing ones. The generator is std::mt19937_64, whose output
// sequence is pinned by the C++ standard, and uniform doubles are produced by
// the explicit 53-bit mapping below rather than std::uniform_real_distribution
// (which is implementation-defined). Results are therefore bit-reproducible
// across platforms.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over the label, mixed with the parent seed.
inline std::uint64_t split_seed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ h);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo is fine here: streams are statistical, not
    // cryptographic, and n is tiny relative to 2^64.
    return n == 0 ? 0 : gen_() % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace gasplan
