#include "sppa/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "vec_ops.hpp"

namespace sppa {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double c : v) {
    if (!std::isfinite(c))
      throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

const EuclideanPoint& require_euclidean(const SpacePoint& x, std::size_t dim,
                                        const char* op) {
  const auto* e = std::get_if<EuclideanPoint>(&x);
  if (e == nullptr)
    throw std::invalid_argument(std::string(op) + ": Euclidean marginal, spider point");
  if (e->coords.size() != dim)
    throw std::invalid_argument(std::string(op) + ": point/marginal dimension mismatch");
  return *e;
}

const SpiderPoint& require_spider(const SpacePoint& x, const char* op) {
  const auto* s = std::get_if<SpiderPoint>(&x);
  if (s == nullptr)
    throw std::invalid_argument(std::string(op) + ": spider marginal, Euclidean point");
  return *s;
}

double spider_dist(const SpiderPoint& a, const SpiderPoint& b) {
  return (a.leg == b.leg) ? std::abs(a.radius - b.radius) : a.radius + b.radius;
}

// Distance scale from x to whatever the marginal pulls toward; sets the
// probe radius.
double pull_distance(const Marginal& m, const SpacePoint& x) {
  return std::visit(
      [&](const auto& marg) -> double {
        using T = std::decay_t<decltype(marg)>;
        if constexpr (std::is_same_v<T, NormDist>) {
          return marginal_value(m, x);
        } else if constexpr (std::is_same_v<T, AbsAffine> ||
                             std::is_same_v<T, SqAffine>) {
          const auto& e = require_euclidean(x, marg.a.size(), "probe_oracle");
          const double na = std::sqrt(detail::norm_sq(marg.a));
          if (na == 0.0) return 0.0;
          return std::abs(detail::dot(marg.a, e.coords) - marg.b) / na;
        } else if constexpr (std::is_same_v<T, RegSqAffine>) {
          const auto& e = require_euclidean(x, marg.a.size(), "probe_oracle");
          const double na = std::sqrt(detail::norm_sq(marg.a));
          const double to_plane =
              na == 0.0 ? 0.0 : std::abs(detail::dot(marg.a, e.coords) - marg.b) / na;
          return std::max(to_plane, std::sqrt(detail::norm_sq(e.coords)));
        } else {
          const auto& s = require_spider(x, "probe_oracle");
          return spider_dist(s, marg.target);
        }
      },
      m);
}

}  // namespace

Marginal norm_dist(std::vector<double> b) {
  if (b.empty()) throw std::invalid_argument("norm_dist: empty target");
  require_finite(b, "norm_dist: target");
  return NormDist{std::move(b)};
}

Marginal abs_affine(std::vector<double> a, double b) {
  if (a.empty()) throw std::invalid_argument("abs_affine: empty coefficient vector");
  require_finite(a, "abs_affine: coefficients");
  if (!std::isfinite(b)) throw std::invalid_argument("abs_affine: offset must be finite");
  return AbsAffine{std::move(a), b};
}

Marginal sq_affine(std::vector<double> a, double b) {
  if (a.empty()) throw std::invalid_argument("sq_affine: empty coefficient vector");
  require_finite(a, "sq_affine: coefficients");
  if (!std::isfinite(b)) throw std::invalid_argument("sq_affine: offset must be finite");
  return SqAffine{std::move(a), b};
}

Marginal reg_sq_affine(std::vector<double> a, double b, double mu) {
  if (a.empty()) throw std::invalid_argument("reg_sq_affine: empty coefficient vector");
  require_finite(a, "reg_sq_affine: coefficients");
  if (!std::isfinite(b))
    throw std::invalid_argument("reg_sq_affine: offset must be finite");
  if (!std::isfinite(mu) || mu <= 0.0)
    throw std::invalid_argument("reg_sq_affine: mu must be positive");
  return RegSqAffine{std::move(a), b, mu};
}

Marginal power_dist(int leg, double radius, int q) {
  if (q != 1 && q != 2) throw std::invalid_argument("power_dist: q must be 1 or 2");
  return PowerDist{spider_point(leg, radius), q};
}

bool is_euclidean_marginal(const Marginal& m) {
  return !std::holds_alternative<PowerDist>(m);
}

double marginal_value(const Marginal& m, const SpacePoint& x) {
  return std::visit(
      [&](const auto& marg) -> double {
        using T = std::decay_t<decltype(marg)>;
        if constexpr (std::is_same_v<T, NormDist>) {
          const auto& e = require_euclidean(x, marg.b.size(), "marginal_value");
          double sum = 0.0;
          for (std::size_t i = 0; i < marg.b.size(); ++i) {
            const double diff = e.coords[i] - marg.b[i];
            sum += diff * diff;
          }
          return std::sqrt(sum);
        } else if constexpr (std::is_same_v<T, AbsAffine>) {
          const auto& e = require_euclidean(x, marg.a.size(), "marginal_value");
          return std::abs(detail::dot(marg.a, e.coords) - marg.b);
        } else if constexpr (std::is_same_v<T, SqAffine>) {
          const auto& e = require_euclidean(x, marg.a.size(), "marginal_value");
          const double r = detail::dot(marg.a, e.coords) - marg.b;
          return 0.5 * r * r;
        } else if constexpr (std::is_same_v<T, RegSqAffine>) {
          const auto& e = require_euclidean(x, marg.a.size(), "marginal_value");
          const double r = detail::dot(marg.a, e.coords) - marg.b;
          return 0.5 * r * r + marg.mu * detail::norm_sq(e.coords);
        } else {
          const auto& s = require_spider(x, "marginal_value");
          const double d = spider_dist(s, marg.target);
          return marg.q == 1 ? d : d * d;
        }
      },
      m);
}

SpacePoint prox(const ProxRequest& req) {
  if (!std::isfinite(req.lambda) || req.lambda <= 0.0)
    throw std::invalid_argument("prox: lambda must be positive");
  const double lambda = req.lambda;
  return std::visit(
      [&](const auto& marg) -> SpacePoint {
        using T = std::decay_t<decltype(marg)>;
        if constexpr (std::is_same_v<T, NormDist>) {
          const auto& e = require_euclidean(req.x, marg.b.size(), "prox");
          double dist = 0.0;
          for (std::size_t i = 0; i < marg.b.size(); ++i) {
            const double diff = e.coords[i] - marg.b[i];
            dist += diff * diff;
          }
          dist = std::sqrt(dist);
          if (dist == 0.0) return req.x;
          const double step = std::min(lambda, dist);
          std::vector<double> out(e.coords.size());
          for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = e.coords[i] + (step / dist) * (marg.b[i] - e.coords[i]);
          return EuclideanPoint{std::move(out)};
        } else if constexpr (std::is_same_v<T, AbsAffine>) {
          const auto& e = require_euclidean(req.x, marg.a.size(), "prox");
          const double na2 = detail::norm_sq(marg.a);
          if (na2 == 0.0) return req.x;
          const double r = detail::dot(marg.a, e.coords) - marg.b;
          if (r >= 0.0) {
            const double step = std::min(lambda, r / na2);
            return EuclideanPoint{detail::axpy(e.coords, -step, marg.a)};
          }
          const double step = std::min(lambda, -r / na2);
          return EuclideanPoint{detail::axpy(e.coords, step, marg.a)};
        } else if constexpr (std::is_same_v<T, SqAffine>) {
          const auto& e = require_euclidean(req.x, marg.a.size(), "prox");
          const double r = detail::dot(marg.a, e.coords) - marg.b;
          const double scale = lambda * r / (1.0 + lambda * detail::norm_sq(marg.a));
          return EuclideanPoint{detail::axpy(e.coords, -scale, marg.a)};
        } else if constexpr (std::is_same_v<T, RegSqAffine>) {
          const auto& e = require_euclidean(req.x, marg.a.size(), "prox");
          // ((alpha I + a a^T) y = x/lambda + b a, alpha = 2 mu + 1/lambda
          const double alpha = 2.0 * marg.mu + 1.0 / lambda;
          std::vector<double> v(e.coords.size());
          for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = e.coords[i] / lambda + marg.b * marg.a[i];
          const double shrink =
              detail::dot(marg.a, v) / (alpha + detail::norm_sq(marg.a));
          std::vector<double> out(v.size());
          for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (v[i] - shrink * marg.a[i]) / alpha;
          return EuclideanPoint{std::move(out)};
        } else {
          const auto& s = require_spider(req.x, "prox");
          const double dist = spider_dist(s, marg.target);
          if (dist == 0.0) return req.x;
          const SpacePoint target{marg.target};
          if (marg.q == 1) {
            const double step = std::min(lambda, dist);
            return geodesic_point(req.x, target, step / dist);
          }
          return geodesic_point(req.x, target, 2.0 * lambda / (1.0 + 2.0 * lambda));
        }
      },
      req.marginal);
}

double prox_objective(const ProxRequest& req, const SpacePoint& y) {
  if (!std::isfinite(req.lambda) || req.lambda <= 0.0)
    throw std::invalid_argument("prox_objective: lambda must be positive");
  const double d = distance(req.x, y);
  return marginal_value(req.marginal, y) + d * d / (2.0 * req.lambda);
}

SpacePoint probe_oracle(const ProxRequest& req, int probes, std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("probe_oracle: probes must be >= 1");
  SpacePoint best = prox(req);
  double best_value = prox_objective(req, best);
  SplitMix64 rng(seed);
  const double radius = 4.0 * (1.0 + pull_distance(req.marginal, req.x));

  auto consider = [&](SpacePoint candidate) {
    const double value = prox_objective(req, candidate);
    if (value < best_value) {
      best_value = value;
      best = std::move(candidate);
    }
  };

  if (const auto* e = std::get_if<EuclideanPoint>(&req.x)) {
    const std::size_t dim = e->coords.size();
    for (int p = 0; p < probes; ++p) {
      // Uniform in the ball: Gaussian direction, radius ~ R u^(1/d).
      std::vector<double> dir(dim);
      for (std::size_t i = 0; i < dim; i += 2) {
        const double u1 = 1.0 - rng.next_double();
        const double u2 = rng.next_double();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        dir[i] = mag * std::cos(2.0 * std::numbers::pi * u2);
        if (i + 1 < dim) dir[i + 1] = mag * std::sin(2.0 * std::numbers::pi * u2);
      }
      double norm = std::sqrt(detail::norm_sq(dir));
      if (norm < 1e-300) {
        dir[0] = 1.0;
        norm = 1.0;
      }
      const double r = radius * std::pow(rng.next_double(), 1.0 / static_cast<double>(dim));
      consider(EuclideanPoint{detail::axpy(e->coords, r / norm, dir)});
    }
  } else {
    const auto& s = std::get<SpiderPoint>(req.x);
    const auto& target = std::get<PowerDist>(req.marginal).target;
    const int legs = std::max(s.leg, target.leg) + 2;
    const double max_radius = s.radius + radius;
    for (int p = 0; p < probes; ++p) {
      const int leg = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(legs)));
      consider(spider(leg, rng.uniform(0.0, max_radius)));
    }
  }
  return best;
}

double resolvent_residual(const ProxRequest& req, const SpacePoint& y) {
  const SpacePoint jx = prox(req);
  const double dxy = distance(req.x, y);
  const double djy = distance(jx, y);
  const double bound = (dxy * dxy - djy * djy) / (2.0 * req.lambda);
  return bound - (marginal_value(req.marginal, jx) - marginal_value(req.marginal, y));
}

}  // namespace sppa
