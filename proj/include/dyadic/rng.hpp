// Seeded, counter-based random streams. Every stream is a pure function of
// (seed, counter), so parallel consumers get identical values regardless of
// scheduling.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dyadic {

// splitmix64, the usual public-domain mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Sequential generator seeded once; used where a plain stream is enough.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // uniform in [0,1)
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  double next_gaussian() {
    // Box-Muller; discards the second variate.
    double u1 = next_u01();
    double u2 = next_u01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::int64_t next_sign() { return (next_u64() & 1u) ? 1 : -1; }

 private:
  std::uint64_t state_;
};

// Independent substream for (seed, index); index is typically a trial counter.
inline SplitMix substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix(splitmix64(seed ^ splitmix64(index + 0x51ed270b71f2c4ddull)));
}

// Fisher-Yates shuffle driven by a SplitMix stream.
template <typename Vec>
void shuffle(Vec& v, SplitMix& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace dyadic
