#pragma once

#include <cstdint>
#include <random>

namespace mixkit {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic uniform stream: mt19937_64 under a splitmix64-scrambled seed.
// The double mapping uses the top 53 bits shifted into (0,1); 0 and 1 are
// never produced, so quantile transforms stay finite.
//
// Stream splitting contract (stable across releases): the child stream with
// index k has seed splitmix64(parent_seed ^ splitmix64(k + 1)). Concurrent
// samplers must use distinct k.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return eng_(); }

  double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  bool fair_bit() { return (next_u64() >> 63) != 0; }

  SeedStream split(std::uint64_t k) const {
    return SeedStream(splitmix64(seed_ ^ splitmix64(k + 1)));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace mixkit
