// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace stref {

// splitmix64: tiny, seedable, identical output on every platform (the
// standard <random> distributions are implementation-defined, which would
// break byte-identical mutant corpora).
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, n) via rejection sampling
  uint64_t below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // uniform in [lo, hi] inclusive
  int64_t range(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo);
    if (span == UINT64_MAX) return static_cast<int64_t>(next());
    return static_cast<int64_t>(static_cast<uint64_t>(lo) + below(span + 1));
  }

  bool coin() { return (next() & 1) != 0; }

  // stable derivation for shardable sub-streams
  static uint64_t derive(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
    Rng r(seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL) ^
          (c * 0x165667b19e3779f9ULL));
    r.next();
    return r.next();
  }

private:
  uint64_t state_;
};

}  // namespace stref
