#include "hetcache/caching.hpp"

#include <algorithm>
#include <stdexcept>

namespace hetcache {

namespace {

// Tie preference pushing content toward the network edge: UE first, then
// SBS, then MBS, lower ordinal within a kind.
int kind_preference(NodeKind kind) {
  switch (kind) {
    case NodeKind::UE: return 0;
    case NodeKind::SBS: return 1;
    case NodeKind::MBS: return 2;
  }
  return 3;
}

bool prefer_node(const NetworkInstance& instance, int a_ord, int b_ord) {
  NodeKind a = instance.node_at(a_ord).kind;
  NodeKind b = instance.node_at(b_ord).kind;
  if (kind_preference(a) != kind_preference(b))
    return kind_preference(a) < kind_preference(b);
  return a_ord < b_ord;
}

}  // namespace

PlacementResult place_all(const NetworkInstance& instance,
                          const PopularityModel& popularity,
                          const Assignment& channels,
                          const DelayBoundTable& bounds,
                          const PlacementOptions& options) {
  for (const auto& v : check_assignment(instance, channels)) {
    if (v.constraint == "one-channel" || v.constraint == "reuse")
      throw std::invalid_argument("place_all: channel allocation infeasible: " +
                                  v.detail);
  }

  // only the channel rows of the input matter; caching starts empty
  Assignment fresh(instance.num_nodes(), instance.num_ues(),
                   instance.params().file_count,
                   instance.params().num_channels);
  for (int u = 1; u <= instance.num_ues(); ++u)
    for (int w = 1; w <= instance.params().num_channels; ++w)
      fresh.set_channel(u, w, channels.channel(u, w));

  PlacementResult result{std::move(fresh), 0.0, {}};
  DeliveryEvaluator eval(instance, popularity, bounds);
  eval.set_channels(result.assignment);

  std::vector<int> free_slots(instance.num_nodes());
  for (int ord = 0; ord < instance.num_nodes(); ++ord)
    free_slots[ord] = instance.cache_slots(instance.node_at(ord));

  auto eligible = [&](int ord) {
    if (free_slots[ord] <= 0) return false;
    if (options.exclude_ue_caches &&
        instance.node_at(ord).kind == NodeKind::UE)
      return false;
    return true;
  };

  const double inv_users = 1.0 / static_cast<double>(instance.num_ues());
  for (int file : popularity.files_by_metric()) {
    int best_ord = -1;
    double best_objective = -1.0;
    for (int ord = 0; ord < instance.num_nodes(); ++ord) {
      if (!eligible(ord)) continue;
      eval.place(file, ord);
      double objective = 0.0;
      for (int u = 1; u <= instance.num_ues(); ++u)
        if (eval.deliverable(u, file))
          objective += popularity.averaged_popularity(u, file);
      eval.unplace(file, ord);
      objective *= inv_users;
      if (objective > best_objective ||
          (objective == best_objective &&
           prefer_node(instance, ord, best_ord))) {
        best_objective = objective;
        best_ord = ord;
      }
    }

    if (best_ord < 0) {
      // no node has a free slot left
      result.trace.push_back({file, -1, 0.0});
      continue;
    }
    if (best_objective <= 0.0) {
      // nothing becomes deliverable; park the file where space is cheapest
      for (int ord = 0; ord < instance.num_nodes(); ++ord) {
        if (!eligible(ord)) continue;
        if (free_slots[ord] > free_slots[best_ord] ||
            (free_slots[ord] == free_slots[best_ord] &&
             prefer_node(instance, ord, best_ord)))
          best_ord = ord;
      }
      best_objective = 0.0;
    }
    eval.place(file, best_ord);
    --free_slots[best_ord];
    result.assignment.set_cached(best_ord, file, true);
    result.trace.push_back({file, best_ord, best_objective});
  }

  eval.fill_deliveries(result.assignment);
  result.sdr = eval.sdr();
  return result;
}

PlacementResult baseline_no_d2d(const NetworkInstance& instance,
                                const PopularityModel& popularity,
                                const Assignment& channels,
                                const DelayBoundTable& bounds) {
  PlacementOptions options;
  options.exclude_ue_caches = true;
  return place_all(instance, popularity, channels, bounds, options);
}

DeliveryOutcome evaluate_deliveries(const NetworkInstance& instance,
                                    const PopularityModel& popularity,
                                    const Assignment& assignment,
                                    const DelayBoundTable& bounds) {
  auto violations = check_assignment(instance, assignment);
  if (!violations.empty())
    throw std::invalid_argument("evaluate_deliveries: infeasible assignment: " +
                                violations.front().constraint + ", " +
                                violations.front().detail);

  DeliveryOutcome outcome{assignment, 0.0, 0.0};
  DeliveryEvaluator eval(instance, popularity, bounds);
  eval.set_channels(assignment);
  for (int f = 1; f <= assignment.num_files(); ++f) {
    int cacher = assignment.cacher_of(f);
    if (cacher >= 0) eval.place(f, cacher);
  }
  eval.fill_deliveries(outcome.assignment);
  outcome.sdr = eval.sdr();
  outcome.weighted_mean_bound = eval.weighted_mean_bound();
  return outcome;
}

}  // namespace hetcache
