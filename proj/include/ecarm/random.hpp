#pragma once

#include <random>

#include "ecarm/arith.hpp"

namespace ecarm {

inline u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the independent substream for one worker.
inline u64 derive_seed(u64 seed, u64 stream) { return splitmix64(splitmix64(seed) ^ splitmix64(stream + 1)); }

// mt19937_64 with a platform-independent bounded draw.
class Rng {
 public:
  explicit Rng(u64 seed) : engine_(seed) {}

  u64 next() { return engine_(); }

  // Uniform on [0, bound) by rejection.
  u64 below(u64 bound) {
    if (bound == 0) throw InvalidInput("empty sampling range");
    const u64 limit = UINT64_MAX - UINT64_MAX % bound;
    u64 v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ecarm
