#include "colsparse/montecarlo.hpp"

#include <cmath>

#include "colsparse/errors.hpp"

namespace colsparse {

void EstimationSpec::validate() const {
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("c must lie in (0,1]");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in (0,1]");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
}

std::uint64_t required_samples(const EstimationSpec& spec) {
  spec.validate();
  const double raw = 3.0 * std::log(1.0 / spec.delta) / (spec.c * spec.epsilon * spec.epsilon);
  // Shave rounding noise so that exact integers (c=1, eps=1, delta=1/e gives 3) stay put.
  return static_cast<std::uint64_t>(std::ceil(raw * (1.0 - 1e-12)));
}

double estimate_event(const std::function<bool(Rng&)>& oracle, std::uint64_t n, Rng& rng) {
  if (n == 0) throw DomainError("estimate_event needs at least one run");
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < n; ++t) {
    Rng child = rng.split(t);
    if (oracle(child)) ++hits;
  }
  rng();  // advance so consecutive estimates use fresh children
  return static_cast<double>(hits) / static_cast<double>(n);
}

KeepProbability attenuation_keep_prob(double estimate, double c) {
  if (!(estimate >= 0.0) || !std::isfinite(estimate)) {
    throw DomainError("estimate must be a nonnegative number");
  }
  if (!(c > 0.0)) throw DomainError("target must be positive");
  if (estimate == 0.0) throw DomainError("cannot attenuate an event estimated at zero");
  if (estimate < c) return {1.0, true};
  return {std::min(1.0, c / estimate), false};
}

MeanEstimate summarize(const std::vector<double>& values) {
  MeanEstimate est;
  est.samples = values.size();
  if (values.empty()) return est;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - est.mean) * (v - est.mean);
    const double var = sq / static_cast<double>(values.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return est;
}

double binomial_stderr(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace colsparse
