#pragma once

// Sample-size rule, event estimation, and attenuation factors.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "colsparse/rng.hpp"

namespace colsparse {

struct EstimationSpec {
  double c = 1.0;        // lower bound on the event probability, in (0,1]
  double epsilon = 1e-3; // relative error, in (0,1)
  double delta = 1e-3;   // failure probability, in (0,1)

  void validate() const;
};

/// ceil(3 ln(1/delta) / (c epsilon^2)).
std::uint64_t required_samples(const EstimationSpec& spec);

/// Frequency of true over n runs; run t draws from the child stream t of rng.
double estimate_event(const std::function<bool(Rng&)>& oracle, std::uint64_t n, Rng& rng);

struct KeepProbability {
  double probability = 1.0;
  bool underflow = false;  // estimate was below the target, so no attenuation applied
};

/// min(1, c / estimate). Throws DomainError for a zero estimate with c > 0.
KeepProbability attenuation_keep_prob(double estimate, double c);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Sample mean with its standard error.
MeanEstimate summarize(const std::vector<double>& values);

/// Binomial standard error sqrt(p(1-p)/n).
double binomial_stderr(double p, std::uint64_t n);

}  // namespace colsparse
