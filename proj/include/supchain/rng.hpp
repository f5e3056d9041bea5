#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace supchain {

// Published default seed for all command line runs and examples.
inline constexpr std::uint64_t kDefaultSeed = 0x5eedba5ec0ffee01ull;

// One splitmix64 step (Steele, Lea, Flood constants).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Collision-resistant mix of three words into one seed value.
inline std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = a;
  s = splitmix64(s) ^ b;
  s = splitmix64(s) ^ c;
  return splitmix64(s);
}

// Fresh generator for one (seed, stream, replicate) triple.  Counter based,
// so replicates can be dispatched to workers in any order and still produce
// the same draws as a sequential run.
inline std::mt19937_64 replicate_rng(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t replicate) {
  return std::mt19937_64(mix3(seed, stream, replicate));
}

// Uniform draw in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform draw in (0, 1].
inline double uniform01_open_left(std::mt19937_64& g) {
  return 1.0 - uniform01(g);
}

// Poisson count via exponential spacings.  Exact for any mean, O(mean) time,
// and immune to the exp(-mean) underflow of the multiplication method.
inline long poisson_count(double mean, std::mt19937_64& g) {
  if (!(mean >= 0.0)) throw std::domain_error("poisson_count: mean must be >= 0");
  long n = 0;
  double acc = -std::log1p(-uniform01(g));
  while (acc <= mean) {
    ++n;
    acc += -std::log1p(-uniform01(g));
  }
  return n;
}

}  // namespace supchain
