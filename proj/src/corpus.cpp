#include "psidensity/corpus.hpp"

#include <random>

namespace psidensity {

std::vector<IntegerSet> comparison_corpus() {
  std::vector<IntegerSet> out;
  for (std::uint64_t a = 2; a <= 7; ++a)
    for (std::uint64_t b : {0, 1}) out.push_back(IntegerSet::ap(a, b));
  out.push_back(IntegerSet::block_pow2_alt());
  for (std::uint32_t seed = 1; seed <= 24; ++seed)
    out.push_back(IntegerSet::block_balanced_random(seed));
  for (std::uint32_t seed = 1; seed <= 14; ++seed) {
    const std::uint64_t a = 2 + (seed % 6);
    const std::uint64_t b = seed % 2;
    std::mt19937 rng(1000 + seed);
    std::vector<std::uint64_t> flips;
    while (flips.size() < 100) flips.push_back(10'000 + rng() % 90'000);
    out.push_back(IntegerSet::toggle(IntegerSet::ap(a, b), std::move(flips)));
  }
  return out;
}

}  // namespace psidensity
