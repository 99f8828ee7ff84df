#include "sppa/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "vec_ops.hpp"

namespace sppa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double weighted_objective(const std::vector<Marginal>& support,
                          const std::vector<double>& weights, const SpacePoint& x) {
  double value = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j)
    value += weights[j] * marginal_value(support[j], x);
  return value;
}

}  // namespace

StepSchedule::StepSchedule(double c, double p, long i0) : c_(c), p_(p), i0_(i0) {
  if (!std::isfinite(c) || c <= 0.0)
    throw std::invalid_argument("StepSchedule: c must be positive");
  if (i0 < 1) throw std::invalid_argument("StepSchedule: i0 must be >= 1");
  if (!(p > 0.5))
    throw std::invalid_argument(
        "StepSchedule: p must exceed 1/2, otherwise the squared-step sum diverges");
  if (!(p <= 1.0))
    throw std::invalid_argument(
        "StepSchedule: p must be at most 1, otherwise the step sum converges");
}

double StepSchedule::lambda(long iteration) const {
  if (iteration < 1) throw std::invalid_argument("StepSchedule: iteration must be >= 1");
  return c_ / std::pow(static_cast<double>(iteration - 1 + i0_), p_);
}

Sampler::Sampler(std::vector<Marginal> support, std::vector<double> weights,
                 std::uint64_t seed)
    : support_(std::move(support)), weights_(std::move(weights)), seed_(seed) {
  if (support_.empty()) throw std::invalid_argument("Sampler: empty support");
  if (support_.size() != weights_.size())
    throw std::invalid_argument("Sampler: support/weights length mismatch");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w <= 0.0)
      throw std::invalid_argument("Sampler: weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("Sampler: weights must sum to 1");
  cumulative_.resize(weights_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    acc += weights_[j];
    cumulative_[j] = acc;
  }
  cumulative_.back() = 1.0;
}

std::size_t Sampler::Stream::next_index() {
  const double u = rng_.next_double();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
  return std::min(idx, cumulative_.size() - 1);
}

SpacePoint sppa_step(const SpacePoint& x, const Marginal& m, double lambda) {
  return prox(ProxRequest{x, lambda, m});
}

RunTrace run(const SpacePoint& start, const Sampler& sampler,
             const StepSchedule& schedule, long iterations,
             const std::optional<SpacePoint>& reference) {
  if (iterations < 1) throw std::invalid_argument("run: iterations must be >= 1");
  RunTrace trace;
  trace.seed = sampler.seed();
  trace.schedule_c = schedule.c();
  trace.schedule_p = schedule.p();
  trace.schedule_i0 = schedule.i0();
  trace.start = start;
  trace.records.reserve(static_cast<std::size_t>(iterations));

  SpacePoint x = start;
  auto stream = sampler.stream();
  for (long i = 1; i <= iterations; ++i) {
    const double lambda = schedule.lambda(i);
    const std::size_t j = stream.next_index();
    const Marginal& m = sampler.support()[j];
    SpacePoint next = prox(ProxRequest{x, lambda, m});

    TraceRecord rec;
    rec.iter = i;
    rec.lambda = lambda;
    rec.marginal_index = static_cast<int>(j);
    rec.step_length = distance(x, next);
    if (reference.has_value()) {
      rec.residual = step_residual(x, next, m, lambda, *reference);
      rec.dist_to_reference = distance(next, *reference);
    } else {
      rec.residual = kNaN;
      rec.dist_to_reference = kNaN;
    }
    rec.objective = estimate_objective(next, sampler);
    rec.x = std::move(next);
    x = rec.x;
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

double step_residual(const SpacePoint& x_prev, const SpacePoint& x_next,
                     const Marginal& m, double lambda, const SpacePoint& y) {
  const double d_prev = distance(x_prev, y);
  const double d_next = distance(x_next, y);
  const double drop = marginal_value(m, x_next) - marginal_value(m, y);
  return d_prev * d_prev - 2.0 * lambda * drop - d_next * d_next;
}

double estimate_objective(const SpacePoint& x, const Sampler& sampler) {
  return weighted_objective(sampler.support(), sampler.weights(), x);
}

GrowthEstimate growth_probe(const Sampler& sampler, const SpaceDesc& space,
                            const SpacePoint& anchor, int pairs, std::uint64_t seed) {
  if (pairs < 1) throw std::invalid_argument("growth_probe: pairs must be >= 1");
  if (!space_contains(space, anchor))
    throw std::invalid_argument("growth_probe: anchor lies outside the space");
  SplitMix64 rng(seed);
  const double radius = 5.0 * (1.0 + distance(anchor, space_origin(space)));

  GrowthEstimate estimate;
  estimate.anchor = anchor;
  estimate.l_hat.assign(sampler.size(), 0.0);
  for (std::size_t j = 0; j < sampler.size(); ++j) {
    const Marginal& m = sampler.support()[j];
    double best = 0.0;
    for (int p = 0; p < pairs; ++p) {
      const SpacePoint x = random_point(space, rng, radius);
      const SpacePoint y = random_point(space, rng, radius);
      const double dxy = distance(x, y);
      if (dxy == 0.0) continue;
      const double ratio = (marginal_value(m, x) - marginal_value(m, y)) /
                           ((1.0 + distance(x, anchor)) * dxy);
      best = std::max(best, ratio);
    }
    estimate.l_hat[j] = best;
    estimate.expected_l_squared += sampler.weights()[j] * best * best;
  }
  return estimate;
}

SpacePoint subgradient_step(const SpacePoint& x, const Marginal& m, double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw std::invalid_argument("subgradient_step: lambda must be positive");
  if (!is_euclidean_marginal(m))
    throw std::invalid_argument(
        "subgradient_step: spider marginals are unsupported (no linear structure)");
  const auto& e = std::get<EuclideanPoint>(x);
  return std::visit(
      [&](const auto& marg) -> SpacePoint {
        using T = std::decay_t<decltype(marg)>;
        if constexpr (std::is_same_v<T, NormDist>) {
          if (e.coords.size() != marg.b.size())
            throw std::invalid_argument("subgradient_step: dimension mismatch");
          std::vector<double> diff(e.coords.size());
          for (std::size_t i = 0; i < diff.size(); ++i)
            diff[i] = e.coords[i] - marg.b[i];
          const double norm = std::sqrt(detail::norm_sq(diff));
          if (norm == 0.0) return x;  // kink convention: g = 0 at b
          return EuclideanPoint{detail::axpy(e.coords, -lambda / norm, diff)};
        } else if constexpr (std::is_same_v<T, AbsAffine>) {
          if (e.coords.size() != marg.a.size())
            throw std::invalid_argument("subgradient_step: dimension mismatch");
          const double r = detail::dot(marg.a, e.coords) - marg.b;
          if (r == 0.0) return x;  // kink convention: g = 0 on the plane
          const double sign = r > 0.0 ? 1.0 : -1.0;
          return EuclideanPoint{detail::axpy(e.coords, -lambda * sign, marg.a)};
        } else if constexpr (std::is_same_v<T, SqAffine>) {
          if (e.coords.size() != marg.a.size())
            throw std::invalid_argument("subgradient_step: dimension mismatch");
          const double r = detail::dot(marg.a, e.coords) - marg.b;
          return EuclideanPoint{detail::axpy(e.coords, -lambda * r, marg.a)};
        } else if constexpr (std::is_same_v<T, RegSqAffine>) {
          if (e.coords.size() != marg.a.size())
            throw std::invalid_argument("subgradient_step: dimension mismatch");
          const double r = detail::dot(marg.a, e.coords) - marg.b;
          std::vector<double> out(e.coords.size());
          for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = e.coords[i] -
                     lambda * (r * marg.a[i] + 2.0 * marg.mu * e.coords[i]);
          return EuclideanPoint{std::move(out)};
        } else {
          throw std::invalid_argument("subgradient_step: unreachable marginal class");
        }
      },
      m);
}

RunTrace cyclic_ppa_run(const SpacePoint& start, const std::vector<Marginal>& marginals,
                        const StepSchedule& schedule, long cycles,
                        const std::optional<SpacePoint>& reference) {
  if (marginals.empty())
    throw std::invalid_argument("cyclic_ppa_run: empty marginal list");
  if (cycles < 1) throw std::invalid_argument("cyclic_ppa_run: cycles must be >= 1");
  const std::vector<double> weights(marginals.size(),
                                    1.0 / static_cast<double>(marginals.size()));
  RunTrace trace;
  trace.seed = 0;
  trace.schedule_c = schedule.c();
  trace.schedule_p = schedule.p();
  trace.schedule_i0 = schedule.i0();
  trace.start = start;
  trace.records.reserve(static_cast<std::size_t>(cycles) * marginals.size());

  SpacePoint x = start;
  long iter = 0;
  for (long cycle = 1; cycle <= cycles; ++cycle) {
    const double lambda = schedule.lambda(cycle);
    for (std::size_t j = 0; j < marginals.size(); ++j) {
      SpacePoint next = prox(ProxRequest{x, lambda, marginals[j]});
      TraceRecord rec;
      rec.iter = ++iter;
      rec.lambda = lambda;
      rec.marginal_index = static_cast<int>(j);
      rec.step_length = distance(x, next);
      if (reference.has_value()) {
        rec.residual = step_residual(x, next, marginals[j], lambda, *reference);
        rec.dist_to_reference = distance(next, *reference);
      } else {
        rec.residual = kNaN;
        rec.dist_to_reference = kNaN;
      }
      rec.objective = weighted_objective(marginals, weights, next);
      rec.x = std::move(next);
      x = rec.x;
      trace.records.push_back(std::move(rec));
    }
  }
  return trace;
}

}  // namespace sppa
