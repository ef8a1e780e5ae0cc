#include "colsparse/rng.hpp"

namespace colsparse {
namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + kGolden) ^ mix64((stream + 1) * kGolden + 0x632BE59BD9B4E019ULL)) {}

Rng::result_type Rng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

bool Rng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform() < p;
}

std::size_t Rng::below(std::size_t n) {
  // Lemire's multiply-shift with rejection; unbiased.
  std::uint64_t x = (*this)();
  u128 m = static_cast<u128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<u128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(key_ ^ mix64(counter_ + 0xD1B54A32D192ED03ULL), stream);
}

}  // namespace colsparse
