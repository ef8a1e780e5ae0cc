#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace colsparse {

// Counter-based generator: output k of stream (seed, id) is a pure function of
// (seed, id, k), so trial t always sees the same draws whatever thread runs it.
// The mixing function is SplitMix64.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// True with probability clamp(p, 0, 1). p <= 0 never draws true, p >= 1 always.
  bool bernoulli(double p);
  /// Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n);

  /// Child stream; independent of this generator's future output.
  Rng split(std::uint64_t stream) const;

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream for trial `trial` of an experiment seeded with `seed`.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return Rng(seed, trial);
}

}  // namespace colsparse
