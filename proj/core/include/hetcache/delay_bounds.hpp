#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "hetcache/special_math.hpp"
#include "hetcache/topology.hpp"

namespace hetcache {

// Search bracket for the Chernoff parameter t. The gamma factor stays finite
// for every t > 0, so the cap is a pragmatic cutoff; minima pinned to an edge
// are reported through MinimizerResult flags.
inline constexpr double kChernoffTMin = 1e-6;
inline constexpr double kChernoffTMax = 6.931471805599453;  // 10 ln 2

// One directed link with its dominant co-channel interferers.
struct LinkBoundParams {
  double theta = 0.0;                    // transmit SNR * path loss at receiver
  std::vector<double> interferer_thetas;
  double load = 0.0;                     // L / (tau * B)
};

// log E[e^(-t Y)] for Y = log2(1 + theta * Exp(1)): the single-slot moment
// that Chernoff exponentiates. Exact quadrature evaluation.
double log_slot_moment(double t, double theta);

// Tail bound for the interference-free link: P[T_link > T] <= zeta0(T),
// clipped to [0, 1]. Minimizes over t with exact evaluations.
double zeta0(const LinkBoundParams& params, int slots);

// Interfered-link tail bound. Requires a non-empty interferer list; the
// interference factor carries no t, so a single joint minimization over t
// reduces to the zeta0 minimum plus the factor.
double zeta1(const LinkBoundParams& params, int slots);

struct DelayBoundEntry {
  double bound_slots = 0.0;   // upper bound on E[T_link]
  int truncation = 0;         // last series term summed
  bool converged = false;
  // clipped tail bounds, zeta[T-1] for T = 1..min(truncation, 128)
  std::vector<double> zeta;
};

// Upper bound on the expected link delay: 1 + sum_T>=1 min(1, zeta(T)).
// (E[T] = sum_{T>=0} P[T > T] and the T=0 term is exactly 1 for a delay of
// at least one slot.) Results are memoized per quantized parameter set.
DelayBoundEntry expected_delay_bound(const LinkBoundParams& params,
                                     double series_rel_tol = 1e-6,
                                     int series_t_max = 10000);

// Per-instance view: resolves node pairs to thetas and memoizes link bounds.
// Interferer sets are singletons or empty, matching the dominant-interferer
// delivery expression; general sets remain available through the free
// functions above. Lazy fills are not synchronized: share a table across
// threads only once the links it will serve have been touched.
class DelayBoundTable {
 public:
  explicit DelayBoundTable(const NetworkInstance& instance);

  // G value for transmitter -> receiver with at most one interferer.
  double link_bound(const NodeId& tx, const NodeId& rx,
                    std::optional<NodeId> interferer = std::nullopt) const;

  const DelayBoundEntry& entry(const NodeId& tx, const NodeId& rx,
                               std::optional<NodeId> interferer) const;

  const NetworkInstance& instance() const { return *instance_; }
  std::size_t size() const { return entries_.size(); }

 private:
  const NetworkInstance* instance_;
  mutable std::unordered_map<std::uint64_t, DelayBoundEntry> entries_;
};

}  // namespace hetcache
