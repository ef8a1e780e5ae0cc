#pragma once

// Small helpers shared by the unit tests.

#include <cmath>
#include <cstdint>
#include <vector>

#include "colsparse/instance.hpp"
#include "colsparse/rng.hpp"

namespace colsparse::test {

inline double sigma(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

/// |freq - p| within z binomial standard deviations (plus a hair for p near 0 or 1).
inline bool within_sigma(double freq, double p, std::uint64_t n, double z) {
  return std::abs(freq - p) <= z * sigma(p, n) + 1e-12;
}

/// Random instance with arbitrary support sizes, coefficients in (0,1], unit capacities.
inline PackingInstance random_instance(std::size_t n, std::size_t m, std::size_t max_k, Rng& rng,
                                       double max_coeff = 1.0) {
  PackingInstance inst;
  inst.n = n;
  inst.m = m;
  inst.capacities.assign(m, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::size_t> rows(m);
    for (std::size_t i = 0; i < m; ++i) rows[i] = i;
    rng.shuffle(std::span<std::size_t>(rows));
    const std::size_t size = 1 + rng.below(std::min(max_k, m));
    std::vector<Entry> col;
    for (std::size_t t = 0; t < size; ++t) {
      col.push_back({rows[t], max_coeff * (1.0 - rng.uniform())});
    }
    inst.columns.push_back(std::move(col));
    inst.weights.push_back(1.0 - rng.uniform());
  }
  return inst;
}

}  // namespace colsparse::test
