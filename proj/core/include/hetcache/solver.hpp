#pragma once

#include <cstdint>
#include <stdexcept>

#include "hetcache/caching.hpp"
#include "hetcache/delivery.hpp"

namespace hetcache {

struct SolveLimits {
  // refuse when (#channel partitions) * (|C|+1)^F exceeds this
  std::uint64_t max_search_space = 100'000'000;
};

class SearchSpaceExceeded : public std::runtime_error {
 public:
  SearchSpaceExceeded(std::uint64_t estimate, std::uint64_t limit)
      : std::runtime_error(
            "exhaustive search space ~" + std::to_string(estimate) +
            " states exceeds the configured limit of " + std::to_string(limit)),
        estimate_(estimate) {}
  std::uint64_t estimate() const { return estimate_; }

 private:
  std::uint64_t estimate_;
};

struct SolveResult {
  Assignment assignment;  // optimal (C, R) with the implied X filled in
  double sdr = 0.0;
  std::uint64_t nodes_explored = 0;
  double elapsed_seconds = 0.0;
};

// Global optimum of the joint placement / channel-allocation problem by
// exhaustive search. The delivery matrix is never enumerated: the objective
// is monotone in x and the delay constraint is its only coupling, so
// x_{u,f} = 1 exactly when the bound meets the threshold. Channels are
// interchangeable, so channel assignments are enumerated as unlabeled user
// partitions with the per-channel reuse cap. Branches whose optimistic SDR
// (all undecided pairs delivered) cannot strictly beat the incumbent are cut;
// a pair that misses the threshold stays failed in the whole subtree because
// added placements only ever add interference mass.
SolveResult solve_exhaustive(const NetworkInstance& instance,
                             const PopularityModel& popularity,
                             const DelayBoundTable& bounds,
                             const SolveLimits& limits = {});

// Search-space estimate used by the limit check.
std::uint64_t exhaustive_search_space(const NetworkInstance& instance);

struct CheckReport {
  std::vector<ConstraintViolation> violations;
  double objective = 0.0;  // SDR of the assignment's own delivery matrix
};

// Feasibility report for a full (C, R, X) triple: structural constraints
// plus the delay-threshold check for every pair marked delivered.
CheckReport check_solution(const NetworkInstance& instance,
                           const PopularityModel& popularity,
                           const DelayBoundTable& bounds,
                           const Assignment& assignment);

}  // namespace hetcache
