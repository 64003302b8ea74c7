/* -*- Mode:C++; c-file-style:"gnu"; indent-tabs-mode:nil; -*- */

#ifndef NDVR_RANDOM_HPP
#define NDVR_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace ndvr {

/**
 * @brief Seeded random stream.
 *
 * Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
 * implements the distribution transforms here so that draws are identical
 * across standard library implementations.
 */
class Random
{
public:
  explicit
  Random(uint64_t seed = 0)
    : m_engine(seed)
  {
  }

  /// Independent substream for (seed, node, purpose).
  static Random
  substream(uint64_t seed, uint64_t node, std::string_view purpose)
  {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : purpose) {
      h ^= static_cast<uint8_t>(c);
      h *= 0x100000001b3ULL;
    }
    return Random(mix(mix(seed) ^ mix(node + 0x9e3779b97f4a7c15ULL) ^ h));
  }

  uint64_t
  next()
  {
    return m_engine();
  }

  uint32_t
  nextU32()
  {
    return static_cast<uint32_t>(m_engine() >> 32);
  }

  /// Uniform in [0, 1).
  double
  uniform()
  {
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
  }

  double
  uniform(double lo, double hi)
  {
    return lo + (hi - lo) * uniform();
  }

  /// Uniform integer in [lo, hi], inclusive.
  int64_t
  uniformInt(int64_t lo, int64_t hi)
  {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    if (span == 0)
      return static_cast<int64_t>(m_engine());
    // rejection sampling keeps the draw unbiased
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = m_engine();
    } while (x >= limit);
    return lo + static_cast<int64_t>(x % span);
  }

  double
  exponential(double mean)
  {
    return -mean * std::log1p(-uniform());
  }

  double
  normal(double mean, double stddev)
  {
    // Box-Muller; one draw per call keeps the stream position easy to reason about
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  static uint64_t
  mix(uint64_t z)
  {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::mt19937_64 m_engine;
};

} // namespace ndvr

#endif // NDVR_RANDOM_HPP
