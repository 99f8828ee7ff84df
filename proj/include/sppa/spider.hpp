#pragma once

#include <vector>

#include "sppa/space.hpp"

namespace sppa {

// Finite weighted set of spider points. Weights are strictly positive and
// sum to one.
struct WeightedSample {
  std::vector<SpiderPoint> points;
  std::vector<double> weights;
};

// Validates lengths, positivity and the unit weight sum (1e-12 slack) and
// canonicalizes radius-0 points.
WeightedSample weighted_sample(std::vector<SpiderPoint> points,
                               std::vector<double> weights);

// Sum of w_j d(x, t_j)^q, q in {1, 2}.
double sample_objective(const WeightedSample& sample, const SpiderPoint& x, int q);

// Exact minimizer of sum_j w_j d(x, t_j)^2. Restricted to any leg the
// objective is a strictly convex parabola, so the minimizer leaves the
// origin along leg k iff the pull of leg k (sum of w_j r_j over points on
// that leg) exceeds the combined pull of all other legs; the radius is then
// the pull surplus.
SpacePoint frechet_mean_oracle(const WeightedSample& sample);

// Exact minimizer of sum_j w_j d(x, t_j). The minimizer leaves the origin
// along leg k iff the weight of points strictly on leg k exceeds 1/2; the
// radius is then a 1-D weighted median. Throws std::domain_error when the
// minimizer is not unique (leg weight exactly 1/2, or a flat
// weighted-median interval on the dominant leg).
SpacePoint frechet_median_oracle(const WeightedSample& sample);

// Brute force: evaluates the objective at the origin and at every grid
// point of every leg (spacing `step`, out to the largest sample radius) and
// returns the argmin.
SpacePoint grid_search_oracle(const SpiderSpace& space, const WeightedSample& sample,
                              int q, double step);

}  // namespace sppa
