#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sppa/space.hpp"

namespace sppa {

// One sampled marginal function f(., xi). Each class below admits an exact
// closed-form resolvent (prox map).

struct NormDist {  // f(x) = |x - b|_2 on Euclidean space
  std::vector<double> b;
};

struct AbsAffine {  // f(x) = |<a,x> - b|
  std::vector<double> a;
  double b = 0.0;
};

struct SqAffine {  // f(x) = (<a,x> - b)^2 / 2
  std::vector<double> a;
  double b = 0.0;
};

struct RegSqAffine {  // f(x) = (<a,x> - b)^2 / 2 + mu |x|^2, mu > 0
  std::vector<double> a;
  double b = 0.0;
  double mu = 1.0;
};

struct PowerDist {  // f(x) = d(x, target)^q on the spider, q in {1, 2}
  SpiderPoint target;
  int q = 2;
};

using Marginal = std::variant<NormDist, AbsAffine, SqAffine, RegSqAffine, PowerDist>;

// Validating factories.
Marginal norm_dist(std::vector<double> b);
Marginal abs_affine(std::vector<double> a, double b);
Marginal sq_affine(std::vector<double> a, double b);
Marginal reg_sq_affine(std::vector<double> a, double b, double mu);
Marginal power_dist(int leg, double radius, int q);

bool is_euclidean_marginal(const Marginal& m);

// f(x, xi), exactly per the class formula.
double marginal_value(const Marginal& m, const SpacePoint& x);

struct ProxRequest {
  SpacePoint x;
  double lambda = 1.0;  // > 0
  Marginal marginal;
};

// argmin_y [ f(y) + d(x,y)^2 / (2 lambda) ], in closed form:
//  - NormDist:    move from x toward b by min(lambda, |x-b|)
//  - AbsAffine:   x -+ min(lambda, |<a,x>-b| / |a|^2) a, identity when a = 0
//  - SqAffine:    x - lambda (<a,x>-b) / (1 + lambda |a|^2) a
//  - RegSqAffine: exact solve of ((2mu + 1/lambda) I + a a^T) y = x/lambda + b a
//                 via the rank-one (Sherman-Morrison) update
//  - PowerDist:   along the geodesic [x, target]; q=1 moves min(lambda, d),
//                 q=2 moves the fraction 2 lambda / (1 + 2 lambda).
// The PowerDist search is confined to [x, target] because the objective is a
// nondecreasing function of d(., target) plus the quadratic pull toward x;
// replacing any candidate by its projected match on [x, target] never
// increases either term in a CAT(0) space.
SpacePoint prox(const ProxRequest& req);

// The prox objective f(y) + d(x,y)^2 / (2 lambda).
double prox_objective(const ProxRequest& req, const SpacePoint& y);

// Randomized certification of the closed forms: evaluates the prox objective
// at the closed-form answer and at `probes` random points, returning the
// best point seen. Euclidean probes fill the ball of radius 4 (1 + s)
// around x, where s is the distance scale from x to the marginal's pull;
// spider probes draw uniform radii on legs 0..max(x.leg, target.leg)+1 (all
// further legs are isometric for this objective). Intended for tests.
SpacePoint probe_oracle(const ProxRequest& req, int probes,
                        std::uint64_t seed = 0x5eedULL);

// Residual of the resolvent descent inequality
//   f(Jx) - f(y) <= [ d(x,y)^2 - d(Jx,y)^2 ] / (2 lambda),
// nonnegative for every y whenever the marginal is convex lsc.
double resolvent_residual(const ProxRequest& req, const SpacePoint& y);

}  // namespace sppa
