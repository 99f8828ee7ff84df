#include "sppa/space.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace sppa {

namespace {

[[noreturn]] void throw_mixed(const char* op) {
  throw std::invalid_argument(std::string(op) + ": points belong to different spaces");
}

void require_same_dim(const EuclideanPoint& x, const EuclideanPoint& y, const char* op) {
  if (x.coords.size() != y.coords.size()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << x.coords.size() << " vs " << y.coords.size()
        << ")";
    throw std::invalid_argument(msg.str());
  }
}

double euclidean_distance(const EuclideanPoint& x, const EuclideanPoint& y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    const double diff = x.coords[i] - y.coords[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double spider_distance(const SpiderPoint& x, const SpiderPoint& y) {
  if (x.leg == y.leg) return std::abs(x.radius - y.radius);
  return x.radius + y.radius;  // path through the origin
}

}  // namespace

SpacePoint euclidean(std::vector<double> coords) {
  if (coords.empty()) throw std::invalid_argument("euclidean: empty coordinate vector");
  for (double c : coords) {
    if (!std::isfinite(c))
      throw std::invalid_argument("euclidean: coordinates must be finite");
  }
  return EuclideanPoint{std::move(coords)};
}

SpiderPoint spider_point(int leg, double radius) {
  if (leg < 0) throw std::invalid_argument("spider: leg index must be >= 0");
  if (!std::isfinite(radius) || radius < 0.0)
    throw std::invalid_argument("spider: radius must be finite and nonnegative");
  if (radius == 0.0) return SpiderPoint{0, 0.0};
  return SpiderPoint{leg, radius};
}

SpacePoint spider(int leg, double radius) { return spider_point(leg, radius); }

bool operator==(const EuclideanPoint& a, const EuclideanPoint& b) {
  return a.coords == b.coords;
}

bool operator==(const SpiderPoint& a, const SpiderPoint& b) {
  return a.leg == b.leg && a.radius == b.radius;
}

std::string to_string(const SpacePoint& p) {
  std::ostringstream out;
  if (const auto* e = std::get_if<EuclideanPoint>(&p)) {
    out << "(";
    for (std::size_t i = 0; i < e->coords.size(); ++i) {
      if (i > 0) out << ", ";
      out << e->coords[i];
    }
    out << ")";
  } else {
    const auto& s = std::get<SpiderPoint>(p);
    out << "spider(leg=" << s.leg << ", r=" << s.radius << ")";
  }
  return out.str();
}

EuclideanSpace::EuclideanSpace(int dim_in) : dim(dim_in) {
  if (dim < 1) throw std::invalid_argument("EuclideanSpace: dimension must be >= 1");
}

SpiderSpace::SpiderSpace(int legs_in) : legs(legs_in) {
  if (legs < 3)
    throw std::invalid_argument(
        "SpiderSpace: need at least 3 legs (fewer is isometric to a line)");
}

SpacePoint space_origin(const SpaceDesc& space) {
  if (const auto* e = std::get_if<EuclideanSpace>(&space)) {
    return EuclideanPoint{std::vector<double>(static_cast<std::size_t>(e->dim), 0.0)};
  }
  return SpiderPoint{0, 0.0};
}

bool space_contains(const SpaceDesc& space, const SpacePoint& p) {
  if (const auto* e = std::get_if<EuclideanSpace>(&space)) {
    const auto* pe = std::get_if<EuclideanPoint>(&p);
    return pe != nullptr && pe->coords.size() == static_cast<std::size_t>(e->dim);
  }
  const auto& s = std::get<SpiderSpace>(space);
  const auto* ps = std::get_if<SpiderPoint>(&p);
  return ps != nullptr && ps->leg >= 0 && ps->leg < s.legs && ps->radius >= 0.0;
}

SpacePoint random_point(const SpaceDesc& space, SplitMix64& rng, double radius) {
  if (const auto* e = std::get_if<EuclideanSpace>(&space)) {
    std::vector<double> coords(static_cast<std::size_t>(e->dim));
    for (double& c : coords) c = rng.uniform(-radius, radius);
    return EuclideanPoint{std::move(coords)};
  }
  const auto& s = std::get<SpiderSpace>(space);
  const int leg = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(s.legs)));
  return spider(leg, rng.uniform(0.0, radius));
}

double distance(const SpacePoint& x, const SpacePoint& y) {
  if (const auto* ex = std::get_if<EuclideanPoint>(&x)) {
    const auto* ey = std::get_if<EuclideanPoint>(&y);
    if (ey == nullptr) throw_mixed("distance");
    require_same_dim(*ex, *ey, "distance");
    return euclidean_distance(*ex, *ey);
  }
  const auto& sx = std::get<SpiderPoint>(x);
  const auto* sy = std::get_if<SpiderPoint>(&y);
  if (sy == nullptr) throw_mixed("distance");
  return spider_distance(sx, *sy);
}

SpacePoint geodesic_point(const SpacePoint& x, const SpacePoint& y, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("geodesic_point: t must lie in [0,1]");
  if (const auto* ex = std::get_if<EuclideanPoint>(&x)) {
    const auto* ey = std::get_if<EuclideanPoint>(&y);
    if (ey == nullptr) throw_mixed("geodesic_point");
    require_same_dim(*ex, *ey, "geodesic_point");
    std::vector<double> coords(ex->coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
      coords[i] = std::lerp(ex->coords[i], ey->coords[i], t);
    return EuclideanPoint{std::move(coords)};
  }
  const auto& sx = std::get<SpiderPoint>(x);
  const auto* sy = std::get_if<SpiderPoint>(&y);
  if (sy == nullptr) throw_mixed("geodesic_point");
  if (sx.leg == sy->leg) return spider(sx.leg, std::lerp(sx.radius, sy->radius, t));
  const double total = sx.radius + sy->radius;
  const double s = t * total;
  if (s <= sx.radius) return spider(sx.leg, sx.radius - s);
  return spider(sy->leg, s - sx.radius);
}

double cat0_residual(const SpacePoint& z, const SpacePoint& x, const SpacePoint& y,
                     double t) {
  const SpacePoint on_geodesic = geodesic_point(x, y, t);
  const double dzx = distance(z, x);
  const double dzy = distance(z, y);
  const double dxy = distance(x, y);
  const double lhs = distance(z, on_geodesic);
  const double rhs =
      (1.0 - t) * dzx * dzx + t * dzy * dzy - t * (1.0 - t) * dxy * dxy;
  return rhs - lhs * lhs;
}

Geodesic::Geodesic(SpacePoint from, SpacePoint to)
    : from_(std::move(from)), to_(std::move(to)), length_(distance(from_, to_)) {}

}  // namespace sppa
