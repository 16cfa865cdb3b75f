#pragma once

#include <cstdint>
#include <string_view>

namespace reoptbench {

/// Counter-based splitmix64 stream.
///
/// Everything below is part of the reproducibility contract; another
/// implementation following it regenerates identical series.
///
///   gamma    = 0x9e3779b97f4a7c15
///   fin(z)   = z ^= z >> 30; z *= 0xbf58476d1ce4e5b9;
///              z ^= z >> 27; z *= 0x94d049bb133111eb; z ^ (z >> 31)
///   mix(x)   = fin(x + gamma)
///   tag      = FNV-1a 64 of the recipe name
///   key      = mix(mix(mix(seed) ^ tag) ^ index)
///   draw k   = fin(key + (k + 1) * gamma)        (k = 0, 1, 2, ...)
///
/// Derived draws:
///   uniform01()      = (draw >> 11) * 2^-53, in [0, 1)
///   uniform(a, b)    = a + (b - a) * uniform01()
///   below_or_equal(n)= Lemire multiply-shift on n + 1 with rejection
///   bernoulli(p)     = uniform01() < p
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t key) : key_(key) {}

  static SplitMix64 for_candidate(std::uint64_t seed, std::string_view recipe_tag,
                                  std::uint64_t index);

  static std::uint64_t finalize(std::uint64_t z);
  static std::uint64_t mix(std::uint64_t x) { return finalize(x + kGamma); }
  static std::uint64_t fnv1a(std::string_view text);

  std::uint64_t next();
  double uniform01();
  double uniform(double a, double b);
  /// Uniform integer in {0, ..., n}.
  std::uint64_t below_or_equal(std::uint64_t n);
  bool bernoulli(double p);

  std::uint64_t key() const { return key_; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace reoptbench
