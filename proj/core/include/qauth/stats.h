#ifndef QAUTH_STATS_H
#define QAUTH_STATS_H

#include <cstdint>
#include <random>

namespace qauth {

using Rng = std::mt19937_64;

/// Named random streams. Every draw in the library comes from
/// derive_seed(user_seed, stream, index), so results do not depend on how
/// work is split across shards.
enum class Stream : uint64_t {
  CODE_KEY = 1,
  OTP_KEY = 2,
  ATTACK = 3,
  STRATEGY = 4,
  TRIAL = 5,
};

/// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based seed for draw `index` of `stream` under `seed`.
constexpr uint64_t derive_seed(uint64_t seed, Stream stream, uint64_t index) {
  return mix64(mix64(seed ^ mix64(static_cast<uint64_t>(stream))) + index);
}

inline Rng make_rng(uint64_t seed, Stream stream, uint64_t index) {
  return Rng(derive_seed(seed, stream, index));
}

struct Interval {
  double low = 0.0;
  double high = 1.0;
  double width() const { return high - low; }
  bool contains(double v) const { return low <= v && v <= high; }
};

/// Exact two-sided Clopper–Pearson interval for `successes` out of `trials`
/// at the given confidence level (0.99 by default). Zero counts give a
/// one-sided upper bound with low = 0.
Interval clopper_pearson(uint64_t successes, uint64_t trials, double confidence = 0.99);

}  // namespace qauth

#endif  // QAUTH_STATS_H
