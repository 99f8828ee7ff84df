#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sppa/resolvent.hpp"
#include "sppa/space.hpp"

namespace sppa {

// Step sizes lambda_i = c / (i - 1 + i0)^p for 1-based iteration i, so the
// default (c=1, p=1, i0=1) is the classical 1/i. Only 1/2 < p <= 1 is
// accepted: the step sum must diverge while the squared-step sum converges.
class StepSchedule {
 public:
  StepSchedule(double c, double p, long i0);

  double lambda(long iteration) const;  // iteration >= 1
  double c() const { return c_; }
  double p() const { return p_; }
  long i0() const { return i0_; }

 private:
  double c_;
  double p_;
  long i0_;
};

// Finite-support distribution over marginals with a seeded deterministic
// draw stream: one 64-bit draw per index, mapped through the inverse CDF.
class Sampler {
 public:
  Sampler(std::vector<Marginal> support, std::vector<double> weights,
          std::uint64_t seed);

  // Owns its cumulative table, so it stays valid past the sampler.
  class Stream {
   public:
    std::size_t next_index();

   private:
    friend class Sampler;
    Stream(std::vector<double> cumulative, std::uint64_t seed)
        : cumulative_(std::move(cumulative)), rng_(seed) {}
    std::vector<double> cumulative_;
    SplitMix64 rng_;
  };

  Stream stream() const { return Stream(cumulative_, seed_); }

  const std::vector<Marginal>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return support_.size(); }

 private:
  std::vector<Marginal> support_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::uint64_t seed_;
};

struct TraceRecord {
  long iter = 0;  // 1-based
  double lambda = 0.0;
  int marginal_index = 0;
  SpacePoint x;
  double step_length = 0.0;
  // Step inequality residual and distance, both against the reference
  // point; NaN when no reference was supplied.
  double residual = 0.0;
  double dist_to_reference = 0.0;
  double objective = 0.0;  // exact finite-support objective at x
};

struct RunTrace {
  std::uint64_t seed = 0;
  double schedule_c = 0.0;
  double schedule_p = 0.0;
  long schedule_i0 = 1;
  SpacePoint start;
  std::vector<TraceRecord> records;
};

// One implicit step: the resolvent of the drawn marginal at step size lambda.
SpacePoint sppa_step(const SpacePoint& x, const Marginal& m, double lambda);

// The stochastic proximal point run x_i = prox(x_{i-1}; lambda_i, xi_i).
// Bitwise deterministic for fixed inputs.
RunTrace run(const SpacePoint& start, const Sampler& sampler,
             const StepSchedule& schedule, long iterations,
             const std::optional<SpacePoint>& reference = std::nullopt);

// d(x_prev,y)^2 - 2 lambda [f(x_next) - f(y)] - d(x_next,y)^2 for a step
// x_prev -> x_next produced by the resolvent of m. Nonnegative for every y.
double step_residual(const SpacePoint& x_prev, const SpacePoint& x_next,
                     const Marginal& m, double lambda, const SpacePoint& y);

// Exact objective sum_j w_j f(x, xi_j) of the finite-support distribution.
double estimate_objective(const SpacePoint& x, const Sampler& sampler);

struct GrowthEstimate {
  SpacePoint anchor;
  std::vector<double> l_hat;       // one empirical constant per support marginal
  double expected_l_squared = 0.0;  // sum_j w_j l_hat_j^2
};

// Empirical lower-bound witness for the growth condition
//   f(x,xi) - f(y,xi) <= L(xi) [1 + d(x, anchor)] d(x,y):
// maximizes the observed ratio over `pairs` random pairs per marginal
// (zero-distance pairs are skipped). Diagnostic, not a certificate.
GrowthEstimate growth_probe(const Sampler& sampler, const SpaceDesc& space,
                            const SpacePoint& anchor, int pairs, std::uint64_t seed);

// Explicit baseline x - lambda g with the canonical subgradient g (zero at
// kinks). Euclidean marginals only; spider marginals have no linear
// structure to differentiate and are rejected.
SpacePoint subgradient_step(const SpacePoint& x, const Marginal& m, double lambda);

// Deterministic baseline: resolvents applied in fixed cyclic order, one
// schedule step per full cycle.
RunTrace cyclic_ppa_run(const SpacePoint& start, const std::vector<Marginal>& marginals,
                        const StepSchedule& schedule, long cycles,
                        const std::optional<SpacePoint>& reference = std::nullopt);

}  // namespace sppa
