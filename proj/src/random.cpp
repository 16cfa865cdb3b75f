#include "reoptbench/random.hpp"

namespace reoptbench {

SplitMix64 SplitMix64::for_candidate(std::uint64_t seed, std::string_view recipe_tag,
                                     std::uint64_t index) {
  return SplitMix64(mix(mix(mix(seed) ^ fnv1a(recipe_tag)) ^ index));
}

std::uint64_t SplitMix64::finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t SplitMix64::next() {
  ++counter_;
  return finalize(key_ + counter_ * kGamma);
}

double SplitMix64::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform(double a, double b) { return a + (b - a) * uniform01(); }

std::uint64_t SplitMix64::below_or_equal(std::uint64_t n) {
  if (n == ~std::uint64_t{0}) return next();
  const std::uint64_t range = n + 1;
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

bool SplitMix64::bernoulli(double p) { return uniform01() < p; }

}  // namespace reoptbench
