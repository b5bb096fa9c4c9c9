#pragma once

#include <string>
#include <vector>

#include "hetcache/delivery.hpp"

namespace hetcache {

struct PlacementStep {
  int file = 0;
  int node_ord = -1;  // -1 when the file ended up un-cached
  double objective = 0.0;
};

struct PlacementResult {
  Assignment assignment;  // caching + channels + implied deliveries
  double sdr = 0.0;
  std::vector<PlacementStep> trace;
};

struct PlacementOptions {
  // restricts the candidate cachers to base stations (the No-D2D baseline)
  bool exclude_ue_caches = false;
};

// Greedy placement: files ranked by the popularity metric Q_f; each file goes
// to the candidate node maximizing the fraction of users it becomes
// deliverable to, evaluated against the partially built placement (earlier
// placements contribute interference through the co-channel request model).
// Ties prefer UE over SBS over MBS, then the lowest ordinal. A file whose
// best objective is zero still gets parked on the node with the most free
// slots, which never hurts the objective.
PlacementResult place_all(const NetworkInstance& instance,
                          const PopularityModel& popularity,
                          const Assignment& channels,
                          const DelayBoundTable& bounds,
                          const PlacementOptions& options = {});

// Algorithm restricted to MBS and SBS caches.
PlacementResult baseline_no_d2d(const NetworkInstance& instance,
                                const PopularityModel& popularity,
                                const Assignment& channels,
                                const DelayBoundTable& bounds);

struct DeliveryOutcome {
  Assignment assignment;  // with the delivery matrix filled in
  double sdr = 0.0;
  double weighted_mean_bound = 0.0;
};

// Implied deliveries of a feasible (C, R): x_{u,f} = 1 iff the delay bound
// meets the threshold; SDR is the popularity mass of delivered pairs.
// Rejects structurally infeasible assignments.
DeliveryOutcome evaluate_deliveries(const NetworkInstance& instance,
                                    const PopularityModel& popularity,
                                    const Assignment& assignment,
                                    const DelayBoundTable& bounds);

}  // namespace hetcache
