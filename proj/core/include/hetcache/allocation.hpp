#pragma once

#include <cstdint>
#include <vector>

#include "hetcache/delivery.hpp"
#include "hetcache/topology.hpp"

namespace hetcache {

// Grouping of the users into W co-channel polygons, with the selection
// metric nu = mean perimeter / perimeter variance.
struct PolygonPartition {
  std::vector<std::vector<int>> groups;  // user ids per channel, ascending
  std::vector<double> perimeters;
  double mean_perimeter = 0.0;
  double variance = 0.0;
  double nu = 0.0;
};

// Perimeter convention: one point is 0, two points fold to twice their
// distance, three or more are walked in angular order around the centroid.
double polygon_perimeter(const std::vector<Point2>& points);

// All partitions of users 1..U into groups matching the (X, R') size profile
// from the Euclidean division of U by W; exposed for the exactness checks.
std::vector<std::vector<std::vector<int>>> enumerate_partitions(int num_users,
                                                                int num_groups);

// Number of distinct partitions with the (X, R') profile, saturating instead
// of overflowing.
std::uint64_t partition_count(int num_users, int num_groups);

struct AllocationOptions {
  // exhaustive enumeration below this candidate count, sampling above
  std::uint64_t enumeration_limit = 10000;
  int sample_count = 10000;
  double variance_floor = 1e-9;  // nu denominator guard for regular partitions
};

// Channel allocation: dedicated channels when W >= U, otherwise the best
// candidate partition by nu, each group bound to one channel. The result
// satisfies the one-channel-per-user and reuse-limit constraints by
// construction.
PolygonPartition choose_partition(const NetworkInstance& instance,
                                  const AllocationOptions& options = {});

Assignment allocate_channels(const NetworkInstance& instance,
                             const AllocationOptions& options = {});

double partition_nu(const NetworkInstance& instance,
                    const std::vector<std::vector<int>>& groups,
                    double variance_floor = 1e-9);

}  // namespace hetcache
