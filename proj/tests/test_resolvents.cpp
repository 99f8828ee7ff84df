#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sppa/check.hpp"
#include "sppa/resolvent.hpp"

using namespace sppa;

namespace {

const EuclideanPoint& as_euclidean(const SpacePoint& p) {
  return std::get<EuclideanPoint>(p);
}

}  // namespace

TEST_CASE("marginal_value: per-class formulas") {
  CHECK(marginal_value(norm_dist({0, 0}), euclidean({3, 4})) == doctest::Approx(5.0));
  CHECK(marginal_value(sq_affine({1, 1}, 1.0), euclidean({1, 1})) ==
        doctest::Approx(0.5));
  CHECK(marginal_value(abs_affine({1, -2}, 0.5), euclidean({1, 1})) ==
        doctest::Approx(1.5));
  CHECK(marginal_value(reg_sq_affine({1, 0}, 0.0, 0.25), euclidean({2, 2})) ==
        doctest::Approx(0.5 * 4.0 + 0.25 * 8.0));
  CHECK(marginal_value(power_dist(1, 2.0, 2), spider(2, 1.0)) == doctest::Approx(9.0));
  CHECK(marginal_value(power_dist(1, 2.0, 1), spider(2, 1.0)) == doctest::Approx(3.0));
}

TEST_CASE("marginal factories reject bad arguments") {
  CHECK_THROWS_AS(norm_dist({}), std::invalid_argument);
  CHECK_THROWS_AS(reg_sq_affine({1.0}, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(reg_sq_affine({1.0}, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(power_dist(1, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(sq_affine({1.0}, std::nan("")), std::invalid_argument);
}

TEST_CASE("marginal/point space mismatches are contract violations") {
  CHECK_THROWS_AS(marginal_value(norm_dist({0, 0}), spider(1, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(marginal_value(power_dist(1, 1.0, 2), euclidean({0, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(prox(ProxRequest{euclidean({0.0}), 1.0, norm_dist({0, 0})}),
                  std::invalid_argument);
  CHECK_THROWS_AS(prox(ProxRequest{euclidean({0, 0}), 0.0, norm_dist({0, 0})}),
                  std::invalid_argument);
  CHECK_THROWS_AS(prox(ProxRequest{euclidean({0, 0}), -1.0, norm_dist({0, 0})}),
                  std::invalid_argument);
}

TEST_CASE("prox: affine-square step (frozen value + probe certificate)") {
  const ProxRequest req{euclidean({0, 0}), 1.0, sq_affine({1, 0}, 1.0)};
  const SpacePoint jx = prox(req);
  CHECK(as_euclidean(jx).coords[0] == doctest::Approx(0.5));
  CHECK(as_euclidean(jx).coords[1] == doctest::Approx(0.0));
  const SpacePoint probe = probe_oracle(req, 10000, 99);
  CHECK(prox_objective(req, jx) <= prox_objective(req, probe) + 1e-9);
}

TEST_CASE("prox: absolute-affine capped step (frozen value + probe certificate)") {
  const ProxRequest req{euclidean({2, 0}), 0.5, abs_affine({1, 0}, 0.0)};
  const SpacePoint jx = prox(req);
  CHECK(as_euclidean(jx).coords[0] == doctest::Approx(1.5));
  CHECK(as_euclidean(jx).coords[1] == doctest::Approx(0.0));
  const SpacePoint probe = probe_oracle(req, 10000, 100);
  CHECK(prox_objective(req, jx) <= prox_objective(req, probe) + 1e-9);
}

TEST_CASE("prox: absolute-affine uncapped step lands on the plane") {
  // |<a,x>-b| / |a|^2 = 0.5 < lambda, so the step projects onto the plane.
  const ProxRequest req{euclidean({0.5, 0.0}), 2.0, abs_affine({1, 0}, 0.0)};
  const SpacePoint jx = prox(req);
  CHECK(as_euclidean(jx).coords[0] == doctest::Approx(0.0));
}

TEST_CASE("prox: zero coefficient vector is the identity") {
  const SpacePoint x = euclidean({1.5, -2.5});
  CHECK(prox(ProxRequest{x, 0.7, abs_affine({0, 0}, 3.0)}) == x);
}

TEST_CASE("prox: norm-distance step caps at the target (frozen + probe)") {
  const ProxRequest req{euclidean({3, 0}), 10.0, norm_dist({0, 0})};
  const SpacePoint jx = prox(req);
  CHECK(as_euclidean(jx).coords[0] == doctest::Approx(0.0));
  CHECK(as_euclidean(jx).coords[1] == doctest::Approx(0.0));
  const SpacePoint probe = probe_oracle(req, 10000, 101);
  CHECK(prox_objective(req, jx) <= prox_objective(req, probe) + 1e-9);
}

TEST_CASE("prox: norm-distance partial step moves along the segment") {
  const ProxRequest req{euclidean({3, 4}), 1.0, norm_dist({0, 0})};
  const SpacePoint jx = prox(req);
  // Unit step from distance 5 leaves 4/5 of the segment.
  CHECK(as_euclidean(jx).coords[0] == doctest::Approx(3.0 * 0.8));
  CHECK(as_euclidean(jx).coords[1] == doctest::Approx(4.0 * 0.8));
}

TEST_CASE("prox: spider squared-distance step reaches the cone point") {
  // Fraction 2*0.5/(1+2*0.5) = 0.5 of arc length 2 travels exactly 1.
  const ProxRequest req{spider(1, 1.0), 0.5, power_dist(2, 1.0, 2)};
  const SpacePoint jx = prox(req);
  CHECK(jx == spider(0, 0.0));
  const SpacePoint probe = probe_oracle(req, 10000, 102);
  CHECK(prox_objective(req, jx) <= prox_objective(req, probe) + 1e-9);
}

TEST_CASE("prox: spider linear-distance step caps at the target") {
  const ProxRequest req{spider(2, 2.0), 5.0, power_dist(1, 1.0, 1)};
  CHECK(prox(req) == spider(1, 1.0));
  // probe_oracle agrees within 1e-9 when the capped step reaches the target.
  CHECK(distance(probe_oracle(req, 2000, 103), spider(1, 1.0)) <= 1e-9);
}

TEST_CASE("prox: fixes minimizers") {
  const SpacePoint on_plane = euclidean({1.0, 2.0});
  CHECK(prox(ProxRequest{on_plane, 1.3, sq_affine({0, 0.5}, 1.0)}) == on_plane);
  CHECK(prox(ProxRequest{euclidean({7, 7}), 2.0, norm_dist({7, 7})}) ==
        euclidean({7, 7}));
  CHECK(prox(ProxRequest{spider(1, 2.0), 0.9, power_dist(1, 2.0, 2)}) ==
        spider(1, 2.0));
  // Ridge minimizer: x* = b a / (|a|^2 + 2 mu) = (1.2, 0).
  const ProxRequest ridge{euclidean({1.2, 0.0}), 0.8, reg_sq_affine({2, 0}, 3.0, 0.5)};
  const SpacePoint fixed = prox(ridge);
  CHECK(as_euclidean(fixed).coords[0] == doctest::Approx(1.2));
  CHECK(as_euclidean(fixed).coords[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("prox: ridge solve matches the plain affine-square limit") {
  // Tiny mu makes the rank-one solve agree with the mu = 0 closed form.
  const std::vector<double> a{1.0, -0.5, 2.0};
  const SpacePoint x = euclidean({0.3, 0.7, -1.1});
  const SpacePoint plain = prox(ProxRequest{x, 0.6, sq_affine(a, 0.4)});
  const SpacePoint ridge = prox(ProxRequest{x, 0.6, reg_sq_affine(a, 0.4, 1e-12)});
  CHECK(distance(plain, ridge) <= 1e-10);
}

TEST_CASE("probe_oracle: contract") {
  const ProxRequest req{euclidean({1, 1}), 1.0, sq_affine({1, 0}, 0.0)};
  CHECK_THROWS_AS(probe_oracle(req, 0), std::invalid_argument);
  // One probe can only improve on the closed form.
  const SpacePoint best = probe_oracle(req, 1, 5);
  CHECK(prox_objective(req, best) <= prox_objective(req, prox(req)) + 1e-15);
}

TEST_CASE("resolvent_residual: collapse at y = Jx") {
  const ProxRequest req{euclidean({0, 0}), 1.0, sq_affine({1, 0}, 1.0)};
  const SpacePoint jx = prox(req);
  const double moved = distance(req.x, jx);
  CHECK(resolvent_residual(req, jx) ==
        doctest::Approx(moved * moved / (2.0 * req.lambda)));
  CHECK(resolvent_residual(req, jx) >= 0.0);
}

TEST_CASE("resolvent_residual: frozen affine-square value") {
  // Jx = (0.5, 0): bound (1 - 0.25)/2 = 0.375, drop 0.125 - 0 = 0.125.
  const ProxRequest req{euclidean({0, 0}), 1.0, sq_affine({1, 0}, 1.0)};
  CHECK(resolvent_residual(req, euclidean({1, 0})) == doctest::Approx(0.25));
}

TEST_CASE("property: resolvent inequality per class (randomized)") {
  SplitMix64 seeds(404);
  for (const auto variant : check::all_prox_variants()) {
    const auto result = check::check_resolvent_inequality(variant, 2000, 1e-9,
                                                          seeds.next_u64());
    INFO(result.name, ": ", result.detail);
    CHECK(result.pass);
  }
}

TEST_CASE("property: probe certification per class (randomized, light)") {
  SplitMix64 seeds(405);
  for (const auto variant : check::all_prox_variants()) {
    const auto result =
        check::check_prox_certification(variant, 25, 2000, 1e-9, seeds.next_u64());
    INFO(result.name, ": ", result.detail);
    CHECK(result.pass);
  }
}

TEST_CASE("property: nonexpansiveness, descent, small-lambda limit") {
  SplitMix64 seeds(406);
  for (const auto variant : check::all_prox_variants()) {
    const auto nonexp = check::check_nonexpansiveness(variant, 2000, seeds.next_u64());
    INFO(nonexp.name, ": ", nonexp.detail);
    CHECK(nonexp.pass);
    const auto descent = check::check_descent(variant, 2000, seeds.next_u64());
    INFO(descent.name, ": ", descent.detail);
    CHECK(descent.pass);
    const auto vanish = check::check_small_lambda_limit(variant, 500, seeds.next_u64());
    INFO(vanish.name, ": ", vanish.detail);
    CHECK(vanish.pass);
  }
}
