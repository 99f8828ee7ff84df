#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sppa/rng.hpp"

namespace sppa {

// Point of a d-dimensional Euclidean space.
struct EuclideanPoint {
  std::vector<double> coords;
};

// Point of a k-spider: k half-lines (legs) glued at a common origin.
// A zero radius always lives on leg 0, so the origin has exactly one
// representation and equality is structural.
struct SpiderPoint {
  int leg = 0;
  double radius = 0.0;
};

using SpacePoint = std::variant<EuclideanPoint, SpiderPoint>;

// Validating constructors. spider() canonicalizes radius 0 to leg 0.
SpacePoint euclidean(std::vector<double> coords);
SpacePoint spider(int leg, double radius);
SpiderPoint spider_point(int leg, double radius);

bool operator==(const EuclideanPoint& a, const EuclideanPoint& b);
bool operator==(const SpiderPoint& a, const SpiderPoint& b);

std::string to_string(const SpacePoint& p);

// Runtime space descriptors; dimension and leg count are configuration
// values, not compile-time constants.
struct EuclideanSpace {
  explicit EuclideanSpace(int dim);
  int dim;
};

struct SpiderSpace {
  explicit SpiderSpace(int legs);  // rejects legs < 3: a 2-spider is just a line
  int legs;
};

using SpaceDesc = std::variant<EuclideanSpace, SpiderSpace>;

SpacePoint space_origin(const SpaceDesc& space);
bool space_contains(const SpaceDesc& space, const SpacePoint& p);

// Uniform draw: Euclidean coordinates in [-radius, radius], spider points
// with a uniform leg and radius in [0, radius].
SpacePoint random_point(const SpaceDesc& space, SplitMix64& rng, double radius);

// Geodesic distance. Both points must belong to the same concrete space.
double distance(const SpacePoint& x, const SpacePoint& y);

// The point gamma(t) of the unique constant-speed geodesic from x to y,
// t in [0,1]. Satisfies d(x, gamma(t)) = t * d(x, y). On the spider the
// geodesic between different legs passes through the origin; on a common
// leg it is the segment.
SpacePoint geodesic_point(const SpacePoint& x, const SpacePoint& y, double t);

// RHS minus LHS of the CAT(0) comparison inequality
//   d(z, gamma(t))^2 <= (1-t) d(z,x)^2 + t d(z,y)^2 - t(1-t) d(x,y)^2
// where gamma is the geodesic from x to y. Nonnegative (up to rounding) in
// a CAT(0) space; identically zero in Euclidean space.
double cat0_residual(const SpacePoint& z, const SpacePoint& x, const SpacePoint& y,
                     double t);

// Constant-speed geodesic between two fixed endpoints.
class Geodesic {
 public:
  Geodesic(SpacePoint from, SpacePoint to);

  const SpacePoint& from() const { return from_; }
  const SpacePoint& to() const { return to_; }
  double length() const { return length_; }
  SpacePoint at(double t) const { return geodesic_point(from_, to_, t); }

 private:
  SpacePoint from_;
  SpacePoint to_;
  double length_;
};

}  // namespace sppa
