#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sppa/engine.hpp"
#include "sppa/resolvent.hpp"

namespace sppa::check {

// The seven closed-form resolvent variants, enumerated so property suites
// can sweep them.
enum class ProxVariant {
  NormDist,
  AbsAffineZero,
  AbsAffineGeneral,
  SqAffine,
  RegSqAffine,
  PowerDistQ1,
  PowerDistQ2,
};

const std::array<ProxVariant, 7>& all_prox_variants();
const char* variant_name(ProxVariant variant);

// Random request with a random point, step size and marginal of the given
// variant (Euclidean dimension 1..5, spider legs 3..5).
ProxRequest random_request(ProxVariant variant, SplitMix64& rng);

// Random point in the same space as the request, on the probe scale.
SpacePoint random_companion(const ProxRequest& request, SplitMix64& rng);

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

PropertyResult check_geometry_axioms(const SpaceDesc& space, int trials,
                                     std::uint64_t seed);
PropertyResult check_spider_canonicalization();
PropertyResult check_mean_grid_agreement(int samples, double step, std::uint64_t seed);
PropertyResult check_median_grid_agreement(int samples, double step,
                                           std::uint64_t seed);
PropertyResult check_oracle_random_dominance(int samples, int probes,
                                             std::uint64_t seed);
PropertyResult check_prox_certification(ProxVariant variant, int requests, int probes,
                                        double tol, std::uint64_t seed);
PropertyResult check_resolvent_inequality(ProxVariant variant, int trials, double tol,
                                          std::uint64_t seed);
PropertyResult check_step_residual(ProxVariant variant, int trials, double tol,
                                   std::uint64_t seed);
PropertyResult check_nonexpansiveness(ProxVariant variant, int trials,
                                      std::uint64_t seed);
PropertyResult check_small_lambda_limit(ProxVariant variant, int trials,
                                        std::uint64_t seed);
PropertyResult check_descent(ProxVariant variant, int trials, std::uint64_t seed);
PropertyResult check_schedule_validity();
PropertyResult check_run_determinism(std::uint64_t seed);
PropertyResult check_point_mass_reduction(std::uint64_t seed);
PropertyResult check_growth_bounds(int pairs, std::uint64_t seed);

// The full suite at the documented trial counts.
std::vector<PropertyResult> run_all(std::uint64_t seed = 20260809ULL);

}  // namespace sppa::check
