#include "sppa/check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sppa/spider.hpp"
#include "vec_ops.hpp"

namespace sppa::check {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << v;
  return out.str();
}

std::vector<double> random_coords(SplitMix64& rng, std::size_t dim, double halfwidth) {
  std::vector<double> coords(dim);
  for (double& c : coords) c = rng.uniform(-halfwidth, halfwidth);
  return coords;
}

std::vector<double> random_nonzero_coords(SplitMix64& rng, std::size_t dim,
                                          double halfwidth) {
  for (;;) {
    auto coords = random_coords(rng, dim, halfwidth);
    if (detail::norm_sq(coords) >= 1e-2) return coords;
  }
}

struct SampleDraw {
  SpiderSpace space;
  WeightedSample sample;
};

// Integer weights keep every leg-weight and cumulative margin at least
// 1/(2N) away from 1/2 unless exactly degenerate, which the median oracle
// rejects; that keeps grid comparisons well conditioned.
SampleDraw random_sample(SplitMix64& rng) {
  const SpiderSpace space(3 + static_cast<int>(rng.next_below(3)));
  const std::size_t count = 1 + rng.next_below(8);
  std::vector<SpiderPoint> points;
  std::vector<long> units(count);
  long total = 0;
  for (std::size_t j = 0; j < count; ++j) {
    points.push_back(spider_point(
        static_cast<int>(rng.next_below(static_cast<std::uint64_t>(space.legs))),
        rng.uniform(0.05, 3.0)));
    units[j] = 1 + static_cast<long>(rng.next_below(9));
    total += units[j];
  }
  std::vector<double> weights(count);
  for (std::size_t j = 0; j < count; ++j)
    weights[j] = static_cast<double>(units[j]) / static_cast<double>(total);
  return SampleDraw{space, weighted_sample(std::move(points), std::move(weights))};
}

}  // namespace

const std::array<ProxVariant, 7>& all_prox_variants() {
  static const std::array<ProxVariant, 7> variants = {
      ProxVariant::NormDist,     ProxVariant::AbsAffineZero,
      ProxVariant::AbsAffineGeneral, ProxVariant::SqAffine,
      ProxVariant::RegSqAffine,  ProxVariant::PowerDistQ1,
      ProxVariant::PowerDistQ2,
  };
  return variants;
}

const char* variant_name(ProxVariant variant) {
  switch (variant) {
    case ProxVariant::NormDist: return "norm-dist";
    case ProxVariant::AbsAffineZero: return "abs-affine-zero";
    case ProxVariant::AbsAffineGeneral: return "abs-affine";
    case ProxVariant::SqAffine: return "sq-affine";
    case ProxVariant::RegSqAffine: return "reg-sq-affine";
    case ProxVariant::PowerDistQ1: return "power-dist-q1";
    case ProxVariant::PowerDistQ2: return "power-dist-q2";
  }
  return "unknown";
}

ProxRequest random_request(ProxVariant variant, SplitMix64& rng) {
  const double lambda = rng.uniform(0.02, 3.0);
  if (variant == ProxVariant::PowerDistQ1 || variant == ProxVariant::PowerDistQ2) {
    const int legs = 3 + static_cast<int>(rng.next_below(3));
    const SpacePoint x =
        spider(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(legs))),
               rng.uniform(0.0, 3.0));
    const int target_leg =
        static_cast<int>(rng.next_below(static_cast<std::uint64_t>(legs)));
    const int q = variant == ProxVariant::PowerDistQ1 ? 1 : 2;
    return ProxRequest{x, lambda, power_dist(target_leg, rng.uniform(0.0, 3.0), q)};
  }
  const std::size_t dim = 1 + rng.next_below(5);
  const SpacePoint x = euclidean(random_coords(rng, dim, 3.0));
  switch (variant) {
    case ProxVariant::NormDist:
      return ProxRequest{x, lambda, norm_dist(random_coords(rng, dim, 3.0))};
    case ProxVariant::AbsAffineZero:
      return ProxRequest{x, lambda,
                         abs_affine(std::vector<double>(dim, 0.0),
                                    rng.uniform(-2.0, 2.0))};
    case ProxVariant::AbsAffineGeneral:
      return ProxRequest{x, lambda,
                         abs_affine(random_nonzero_coords(rng, dim, 2.0),
                                    rng.uniform(-2.0, 2.0))};
    case ProxVariant::SqAffine:
      return ProxRequest{x, lambda,
                         sq_affine(random_nonzero_coords(rng, dim, 2.0),
                                   rng.uniform(-2.0, 2.0))};
    case ProxVariant::RegSqAffine:
      return ProxRequest{x, lambda,
                         reg_sq_affine(random_nonzero_coords(rng, dim, 2.0),
                                       rng.uniform(-2.0, 2.0), rng.uniform(0.05, 2.0))};
    default:
      throw std::logic_error("random_request: unreachable variant");
  }
}

SpacePoint random_companion(const ProxRequest& request, SplitMix64& rng) {
  if (const auto* e = std::get_if<EuclideanPoint>(&request.x))
    return euclidean(random_coords(rng, e->coords.size(), 6.0));
  const auto& x = std::get<SpiderPoint>(request.x);
  const auto& target = std::get<PowerDist>(request.marginal).target;
  const int legs = std::max(x.leg, target.leg) + 2;
  return spider(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(legs))),
                rng.uniform(0.0, 6.0));
}

PropertyResult check_geometry_axioms(const SpaceDesc& space, int trials,
                                     std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double halfwidth = 5.0;
  double worst_cat0 = 0.0;
  double worst_speed = 0.0;
  double worst_symmetry = 0.0;
  double worst_triangle = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const SpacePoint x = random_point(space, rng, halfwidth);
    const SpacePoint y = random_point(space, rng, halfwidth);
    const SpacePoint z = random_point(space, rng, halfwidth);
    const double t = rng.next_double();
    const double s = rng.next_double();

    worst_cat0 = std::min(worst_cat0, cat0_residual(z, x, y, t));

    const double dxy = distance(x, y);
    const double speed_gap =
        std::abs(distance(geodesic_point(x, y, s), geodesic_point(x, y, t)) -
                 std::abs(s - t) * dxy) -
        1e-10 * (1.0 + dxy);
    worst_speed = std::max(worst_speed, speed_gap);

    worst_symmetry = std::max(worst_symmetry, std::abs(dxy - distance(y, x)));
    const double slack =
        distance(x, y) + distance(y, z) - distance(x, z) + 1e-12 * (1.0 + dxy);
    worst_triangle = std::min(worst_triangle, slack);
  }
  PropertyResult result;
  std::ostringstream name;
  if (const auto* e = std::get_if<EuclideanSpace>(&space))
    name << "geometry-axioms[euclidean-d" << e->dim << "]";
  else
    name << "geometry-axioms[spider-k" << std::get<SpiderSpace>(space).legs << "]";
  result.name = name.str();
  result.pass = worst_cat0 >= -1e-10 && worst_speed <= 0.0 &&
                worst_symmetry <= 1e-12 && worst_triangle >= 0.0;
  result.detail = "min cat0 residual " + fmt(worst_cat0) + ", " +
                  std::to_string(trials) + " quadruples";
  return result;
}

PropertyResult check_spider_canonicalization() {
  PropertyResult result;
  result.name = "spider-canonicalization";
  const SpacePoint origin = spider(0, 0.0);
  bool pass = true;
  for (int leg = 0; leg < 6; ++leg) pass = pass && (spider(leg, 0.0) == origin);
  pass = pass && (geodesic_point(spider(1, 2.0), spider(2, 2.0), 0.5) == origin);
  result.pass = pass;
  result.detail = "radius-0 points collapse to one origin representation";
  return result;
}

PropertyResult check_mean_grid_agreement(int samples, double step, std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto draw = random_sample(rng);
    const SpacePoint mean = frechet_mean_oracle(draw.sample);
    const SpacePoint grid = grid_search_oracle(draw.space, draw.sample, 2, step);
    worst = std::max(worst, distance(mean, grid));
  }
  PropertyResult result;
  result.name = "frechet-mean-grid-agreement";
  result.pass = worst <= 2.0 * step;
  result.detail = "max oracle/grid distance " + fmt(worst) + " over " +
                  std::to_string(samples) + " samples (step " + fmt(step) + ")";
  return result;
}

PropertyResult check_median_grid_agreement(int samples, double step,
                                           std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  int found = 0;
  int attempts = 0;
  while (found < samples && attempts < samples * 100) {
    ++attempts;
    const auto draw = random_sample(rng);
    SpacePoint median;
    try {
      median = frechet_median_oracle(draw.sample);
    } catch (const std::domain_error&) {
      continue;  // degenerate configuration, redraw
    }
    ++found;
    const SpacePoint grid = grid_search_oracle(draw.space, draw.sample, 1, step);
    worst = std::max(worst, distance(median, grid));
  }
  PropertyResult result;
  result.name = "frechet-median-grid-agreement";
  result.pass = found == samples && worst <= 2.0 * step;
  result.detail = "max oracle/grid distance " + fmt(worst) + " over " +
                  std::to_string(found) + " non-degenerate samples";
  return result;
}

PropertyResult check_oracle_random_dominance(int samples, int probes,
                                             std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto draw = random_sample(rng);
    double max_radius = 0.0;
    for (const auto& p : draw.sample.points)
      max_radius = std::max(max_radius, p.radius);
    for (int q = 1; q <= 2; ++q) {
      SpacePoint oracle;
      if (q == 1) {
        try {
          oracle = frechet_median_oracle(draw.sample);
        } catch (const std::domain_error&) {
          continue;
        }
      } else {
        oracle = frechet_mean_oracle(draw.sample);
      }
      const double at_oracle =
          sample_objective(draw.sample, std::get<SpiderPoint>(oracle), q);
      for (int p = 0; p < probes; ++p) {
        const int leg =
            static_cast<int>(rng.next_below(static_cast<std::uint64_t>(draw.space.legs)));
        const SpiderPoint candidate =
            spider_point(leg, rng.uniform(0.0, max_radius + 1.0));
        worst = std::max(worst,
                         at_oracle - sample_objective(draw.sample, candidate, q));
      }
    }
  }
  PropertyResult result;
  result.name = "frechet-oracle-dominates-random-points";
  result.pass = worst <= 1e-12;
  result.detail = "max oracle excess " + fmt(worst) + " against " +
                  std::to_string(probes) + " random points per sample";
  return result;
}

PropertyResult check_prox_certification(ProxVariant variant, int requests, int probes,
                                        double tol, std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < requests; ++i) {
    const ProxRequest req = random_request(variant, rng);
    const SpacePoint closed_form = prox(req);
    const SpacePoint best = probe_oracle(req, probes, rng.next_u64());
    worst = std::max(worst,
                     prox_objective(req, closed_form) - prox_objective(req, best));
  }
  PropertyResult result;
  result.name = std::string("prox-certification[") + variant_name(variant) + "]";
  result.pass = worst <= tol;
  result.detail = "max closed-form excess " + fmt(worst) + " over " +
                  std::to_string(requests) + "x" + std::to_string(probes) + " probes";
  return result;
}

PropertyResult check_resolvent_inequality(ProxVariant variant, int trials, double tol,
                                          std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const ProxRequest req = random_request(variant, rng);
    const SpacePoint y = random_companion(req, rng);
    worst = std::min(worst, resolvent_residual(req, y));
  }
  PropertyResult result;
  result.name = std::string("resolvent-inequality[") + variant_name(variant) + "]";
  result.pass = worst >= -tol;
  result.detail =
      "min residual " + fmt(worst) + " over " + std::to_string(trials) + " trials";
  return result;
}

PropertyResult check_step_residual(ProxVariant variant, int trials, double tol,
                                   std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const ProxRequest req = random_request(variant, rng);
    const SpacePoint next = prox(req);
    const SpacePoint y = random_companion(req, rng);
    worst = std::min(worst, step_residual(req.x, next, req.marginal, req.lambda, y));
  }
  PropertyResult result;
  result.name = std::string("step-residual[") + variant_name(variant) + "]";
  result.pass = worst >= -tol;
  result.detail =
      "min residual " + fmt(worst) + " over " + std::to_string(trials) + " steps";
  return result;
}

PropertyResult check_nonexpansiveness(ProxVariant variant, int trials,
                                      std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const ProxRequest req = random_request(variant, rng);
    const SpacePoint other = random_companion(req, rng);
    const double base = distance(req.x, other);
    if (base == 0.0) continue;  // vacuous
    const SpacePoint jx = prox(req);
    const SpacePoint jother = prox(ProxRequest{other, req.lambda, req.marginal});
    worst = std::max(worst, distance(jx, jother) - base * (1.0 + 1e-12));
  }
  PropertyResult result;
  result.name = std::string("prox-nonexpansive[") + variant_name(variant) + "]";
  result.pass = worst <= 0.0;
  result.detail = "max expansion above (1+1e-12) factor: " + fmt(worst);
  return result;
}

PropertyResult check_small_lambda_limit(ProxVariant variant, int trials,
                                        std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    ProxRequest req = random_request(variant, rng);
    req.lambda = 1e-8;
    const double moved = distance(prox(req), req.x);
    const double allowance =
        1e-4 * (1.0 + std::abs(marginal_value(req.marginal, req.x)));
    worst = std::max(worst, moved - allowance);
  }
  PropertyResult result;
  result.name = std::string("prox-small-lambda[") + variant_name(variant) + "]";
  result.pass = worst <= 0.0;
  result.detail = "max movement above the 1e-4 (1+f) allowance: " + fmt(worst);
  return result;
}

PropertyResult check_descent(ProxVariant variant, int trials, std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const ProxRequest req = random_request(variant, rng);
    const SpacePoint jx = prox(req);
    const double moved = distance(req.x, jx);
    const double lhs = marginal_value(req.marginal, jx) +
                       moved * moved / (2.0 * req.lambda);
    worst = std::max(worst, lhs - marginal_value(req.marginal, req.x) - 1e-12);
  }
  PropertyResult result;
  result.name = std::string("prox-descent[") + variant_name(variant) + "]";
  result.pass = worst <= 0.0;
  result.detail = "max objective increase beyond 1e-12 slack: " + fmt(worst);
  return result;
}

PropertyResult check_schedule_validity() {
  PropertyResult result;
  result.name = "schedule-validity";
  bool pass = true;
  std::string detail;
  try {
    StepSchedule(1.0, 1.0, 1);
    StepSchedule(2.5, 0.75, 3);
    StepSchedule(1.0, 0.51, 1);
  } catch (const std::exception&) {
    pass = false;
    detail = "valid schedule rejected";
  }
  const auto expect_reject = [&](double c, double p, long i0, const char* needle) {
    try {
      StepSchedule schedule(c, p, i0);
      pass = false;
      detail += std::string(" accepted invalid p=") + std::to_string(p) + ";";
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).find(needle) == std::string::npos) {
        pass = false;
        detail += std::string(" wrong message for p=") + std::to_string(p) + ";";
      }
    }
  };
  expect_reject(1.0, 0.5, 1, "squared-step");
  expect_reject(1.0, 0.3, 1, "squared-step");
  expect_reject(1.0, 1.1, 1, "step sum converges");
  if (detail.empty())
    detail = "accepts p in (1/2,1], rejects p=0.5 and p=1.1 with series-keyed errors";
  result.pass = pass;
  result.detail = detail;
  return result;
}

PropertyResult check_run_determinism(std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Marginal> support;
  for (int j = 0; j < 3; ++j)
    support.push_back(
        sq_affine(random_nonzero_coords(rng, 2, 2.0), rng.uniform(-2.0, 2.0)));
  const Sampler sampler(support, {0.5, 0.25, 0.25}, 777);
  const StepSchedule schedule(1.0, 1.0, 1);
  const SpacePoint start = euclidean({1.0, -1.0});
  const RunTrace a = run(start, sampler, schedule, 200);
  const RunTrace b = run(start, sampler, schedule, 200);
  bool pass = a.records.size() == b.records.size();
  for (std::size_t i = 0; pass && i < a.records.size(); ++i) {
    pass = a.records[i].x == b.records[i].x &&
           a.records[i].lambda == b.records[i].lambda &&
           a.records[i].marginal_index == b.records[i].marginal_index &&
           a.records[i].objective == b.records[i].objective;
  }
  PropertyResult result;
  result.name = "run-determinism";
  result.pass = pass;
  result.detail = "two runs with one seed agree element for element";
  return result;
}

PropertyResult check_point_mass_reduction(std::uint64_t seed) {
  SplitMix64 rng(seed);
  const Marginal m = norm_dist(random_coords(rng, 2, 2.0));
  const Sampler sampler({m}, {1.0}, 123);
  const StepSchedule schedule(1.0, 1.0, 1);
  const SpacePoint start = euclidean({2.0, 2.0});
  const RunTrace stochastic = run(start, sampler, schedule, 50);
  const RunTrace cyclic = cyclic_ppa_run(start, {m}, schedule, 50);
  bool pass = stochastic.records.size() == cyclic.records.size();
  for (std::size_t i = 0; pass && i < stochastic.records.size(); ++i)
    pass = stochastic.records[i].x == cyclic.records[i].x;
  PropertyResult result;
  result.name = "point-mass-reduction";
  result.pass = pass;
  result.detail = "one-marginal SPPA equals deterministic PPA step for step";
  return result;
}

PropertyResult check_growth_bounds(int pairs, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const SpaceDesc space{EuclideanSpace(3)};
  const SpacePoint anchor = space_origin(space);

  std::vector<Marginal> dists;
  for (int j = 0; j < 3; ++j) dists.push_back(norm_dist(random_coords(rng, 3, 3.0)));
  const Sampler dist_sampler(dists, {0.25, 0.25, 0.5}, 5);
  const auto dist_probe = growth_probe(dist_sampler, space, anchor, pairs, rng.next_u64());

  std::vector<Marginal> affines;
  std::vector<double> lipschitz;
  for (int j = 0; j < 3; ++j) {
    auto a = random_nonzero_coords(rng, 3, 2.0);
    lipschitz.push_back(std::sqrt(detail::norm_sq(a)));
    affines.push_back(abs_affine(std::move(a), rng.uniform(-2.0, 2.0)));
  }
  const Sampler affine_sampler(affines, {0.25, 0.25, 0.5}, 6);
  const auto affine_probe =
      growth_probe(affine_sampler, space, anchor, pairs, rng.next_u64());

  const Sampler constant_sampler({abs_affine({0.0, 0.0, 0.0}, 0.0)}, {1.0}, 7);
  const auto constant_probe =
      growth_probe(constant_sampler, space, anchor, pairs, rng.next_u64());

  bool pass = true;
  double worst = 0.0;
  for (double l : dist_probe.l_hat) {
    worst = std::max(worst, l - 1.0);
    pass = pass && l <= 1.0 + 1e-9;
  }
  for (std::size_t j = 0; j < affines.size(); ++j)
    pass = pass && affine_probe.l_hat[j] <= lipschitz[j] + 1e-9;
  pass = pass && constant_probe.l_hat[0] == 0.0 &&
         constant_probe.expected_l_squared == 0.0;

  PropertyResult result;
  result.name = "growth-probe-bounds";
  result.pass = pass;
  result.detail = "norm-dist max excess over 1: " + fmt(worst) + " across " +
                  std::to_string(pairs) + " pairs";
  return result;
}

std::vector<PropertyResult> run_all(std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<PropertyResult> results;
  for (int dim : {1, 2, 5})
    results.push_back(
        check_geometry_axioms(SpaceDesc{EuclideanSpace(dim)}, 10000, rng.next_u64()));
  for (int legs : {3, 5})
    results.push_back(
        check_geometry_axioms(SpaceDesc{SpiderSpace(legs)}, 10000, rng.next_u64()));
  results.push_back(check_spider_canonicalization());
  results.push_back(check_mean_grid_agreement(200, 1e-3, rng.next_u64()));
  results.push_back(check_median_grid_agreement(200, 1e-3, rng.next_u64()));
  results.push_back(check_oracle_random_dominance(20, 1000, rng.next_u64()));
  for (ProxVariant variant : all_prox_variants()) {
    results.push_back(
        check_prox_certification(variant, 100, 10000, 1e-9, rng.next_u64()));
    results.push_back(check_resolvent_inequality(variant, 10000, 1e-9, rng.next_u64()));
    results.push_back(check_step_residual(variant, 10000, 1e-9, rng.next_u64()));
    results.push_back(check_nonexpansiveness(variant, 10000, rng.next_u64()));
    results.push_back(check_small_lambda_limit(variant, 1000, rng.next_u64()));
    results.push_back(check_descent(variant, 10000, rng.next_u64()));
  }
  results.push_back(check_schedule_validity());
  results.push_back(check_run_determinism(rng.next_u64()));
  results.push_back(check_point_mass_reduction(rng.next_u64()));
  results.push_back(check_growth_bounds(10000, rng.next_u64()));
  return results;
}

}  // namespace sppa::check
