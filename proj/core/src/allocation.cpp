#include "hetcache/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hetcache/rng.hpp"

namespace hetcache {

double polygon_perimeter(const std::vector<Point2>& points) {
  if (points.size() <= 1) return 0.0;
  if (points.size() == 2)
    return 2.0 * std::hypot(points[0].x - points[1].x,
                            points[0].y - points[1].y);

  Point2 centroid{0.0, 0.0};
  for (const Point2& p : points) {
    centroid.x += p.x;
    centroid.y += p.y;
  }
  centroid.x /= static_cast<double>(points.size());
  centroid.y /= static_cast<double>(points.size());

  std::vector<Point2> ordered = points;
  std::sort(ordered.begin(), ordered.end(), [&](const Point2& a,
                                                const Point2& b) {
    double aa = std::atan2(a.y - centroid.y, a.x - centroid.x);
    double ab = std::atan2(b.y - centroid.y, b.x - centroid.x);
    if (aa != ab) return aa < ab;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });

  double perimeter = 0.0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const Point2& a = ordered[i];
    const Point2& b = ordered[(i + 1) % ordered.size()];
    perimeter += std::hypot(a.x - b.x, a.y - b.y);
  }
  return perimeter;
}

namespace {

// R' groups of size X+1 and W-R' of size X, from U = X*W + R'.
std::vector<int> size_profile(int num_users, int num_groups) {
  int x = num_users / num_groups;
  int rem = num_users % num_groups;
  std::vector<int> sizes;
  for (int j = 0; j < rem; ++j) sizes.push_back(x + 1);
  for (int j = rem; j < num_groups; ++j) sizes.push_back(x);
  return sizes;
}

void enumerate_rec(int user, int num_users, const std::vector<int>& sizes,
                   std::vector<std::vector<int>>& groups,
                   std::vector<std::vector<std::vector<int>>>& out) {
  if (user > num_users) {
    out.push_back(groups);
    return;
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (static_cast<int>(groups[g].size()) >= sizes[g]) continue;
    // among equal-size groups, an empty group may only be opened if it is
    // the first empty one; this yields each unordered partition exactly once
    if (groups[g].empty()) {
      bool first_empty_of_size = true;
      for (std::size_t h = 0; h < g; ++h)
        if (sizes[h] == sizes[g] && groups[h].empty())
          first_empty_of_size = false;
      if (!first_empty_of_size) continue;
    }
    groups[g].push_back(user);
    enumerate_rec(user + 1, num_users, sizes, groups, out);
    groups[g].pop_back();
  }
}

}  // namespace

std::vector<std::vector<std::vector<int>>> enumerate_partitions(
    int num_users, int num_groups) {
  if (num_groups < 1 || num_users < num_groups)
    throw std::invalid_argument("enumerate_partitions: requires U >= W >= 1");
  std::vector<int> sizes = size_profile(num_users, num_groups);
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> groups(num_groups);
  enumerate_rec(1, num_users, sizes, groups, out);
  return out;
}

std::uint64_t partition_count(int num_users, int num_groups) {
  if (num_groups < 1 || num_users < num_groups) return 0;
  int larger = num_users % num_groups;   // groups of size X+1
  int smaller = num_groups - larger;     // groups of size X
  std::vector<int> sizes = size_profile(num_users, num_groups);
  double log_count = std::lgamma(num_users + 1.0);
  for (int s : sizes) log_count -= std::lgamma(s + 1.0);
  // identical-size groups are unordered
  log_count -= std::lgamma(larger + 1.0);
  log_count -= std::lgamma(smaller + 1.0);
  if (log_count > 43.0) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::llround(std::exp(log_count)));
}

double partition_nu(const NetworkInstance& instance,
                    const std::vector<std::vector<int>>& groups,
                    double variance_floor) {
  double w = static_cast<double>(groups.size());
  double mean = 0.0;
  std::vector<double> perims;
  perims.reserve(groups.size());
  for (const auto& group : groups) {
    std::vector<Point2> pts;
    pts.reserve(group.size());
    for (int u : group) pts.push_back(instance.position(ue_node(u)));
    perims.push_back(polygon_perimeter(pts));
    mean += perims.back();
  }
  mean /= w;
  double variance = 0.0;
  for (double p : perims) variance += (p - mean) * (p - mean);
  variance /= w;
  return mean / (variance + variance_floor);
}

namespace {

PolygonPartition finalize(const NetworkInstance& instance,
                          std::vector<std::vector<int>> groups,
                          double variance_floor) {
  PolygonPartition part;
  part.groups = std::move(groups);
  for (auto& group : part.groups) std::sort(group.begin(), group.end());
  double w = static_cast<double>(part.groups.size());
  for (const auto& group : part.groups) {
    std::vector<Point2> pts;
    for (int u : group) pts.push_back(instance.position(ue_node(u)));
    part.perimeters.push_back(polygon_perimeter(pts));
    part.mean_perimeter += part.perimeters.back();
  }
  part.mean_perimeter /= w;
  for (double p : part.perimeters)
    part.variance += (p - part.mean_perimeter) * (p - part.mean_perimeter);
  part.variance /= w;
  part.nu = part.mean_perimeter / (part.variance + variance_floor);
  return part;
}

// Spread seed users far apart, then grow groups by max-min distance, keeping
// the exact size profile. A dispersion-oriented starting candidate for the
// sampled regime.
std::vector<std::vector<int>> greedy_dispersion_partition(
    const NetworkInstance& instance, const std::vector<int>& sizes) {
  int num_users = instance.num_ues();
  auto dist = [&](int a, int b) {
    return instance.distance(ue_node(a), ue_node(b));
  };

  std::vector<int> seeds;
  {
    int first = 1;
    double best = -1.0;
    for (int u = 1; u <= num_users; ++u) {
      const Point2& p = instance.position(ue_node(u));
      double r = std::hypot(p.x, p.y);
      if (r > best) {
        best = r;
        first = u;
      }
    }
    seeds.push_back(first);
    while (seeds.size() < sizes.size()) {
      int pick = -1;
      double pick_score = -1.0;
      for (int u = 1; u <= num_users; ++u) {
        if (std::find(seeds.begin(), seeds.end(), u) != seeds.end()) continue;
        double score = std::numeric_limits<double>::infinity();
        for (int s : seeds) score = std::min(score, dist(u, s));
        if (score > pick_score) {
          pick_score = score;
          pick = u;
        }
      }
      seeds.push_back(pick);
    }
  }

  std::vector<std::vector<int>> groups(sizes.size());
  for (std::size_t g = 0; g < seeds.size(); ++g) groups[g].push_back(seeds[g]);
  for (int u = 1; u <= num_users; ++u) {
    if (std::find(seeds.begin(), seeds.end(), u) != seeds.end()) continue;
    int pick = -1;
    double pick_score = -1.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (static_cast<int>(groups[g].size()) >= sizes[g]) continue;
      double closest = std::numeric_limits<double>::infinity();
      for (int member : groups[g]) closest = std::min(closest, dist(u, member));
      if (closest > pick_score) {
        pick_score = closest;
        pick = static_cast<int>(g);
      }
    }
    groups[pick].push_back(u);
  }
  return groups;
}

}  // namespace

PolygonPartition choose_partition(const NetworkInstance& instance,
                                  const AllocationOptions& options) {
  int num_users = instance.num_ues();
  int num_chans = instance.params().num_channels;

  if (num_chans >= num_users) {
    // dedicated channel per user
    std::vector<std::vector<int>> groups(num_chans);
    for (int u = 1; u <= num_users; ++u) groups[u - 1].push_back(u);
    return finalize(instance, std::move(groups), options.variance_floor);
  }

  std::uint64_t count = partition_count(num_users, num_chans);
  std::vector<std::vector<int>> best;
  double best_nu = -std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<std::vector<int>>& groups) {
    double nu = partition_nu(instance, groups, options.variance_floor);
    if (nu > best_nu) {
      best_nu = nu;
      best = groups;
    }
  };

  if (count <= options.enumeration_limit) {
    for (const auto& groups : enumerate_partitions(num_users, num_chans))
      consider(groups);
  } else {
    std::vector<int> sizes = size_profile(num_users, num_chans);
    consider(greedy_dispersion_partition(instance, sizes));
    Rng rng(derive_seed(instance.seed(), 0xa110c));
    std::vector<int> order(num_users);
    for (int u = 1; u <= num_users; ++u) order[u - 1] = u;
    for (int s = 0; s < options.sample_count; ++s) {
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.index(i)]);
      std::vector<std::vector<int>> groups(sizes.size());
      std::size_t at = 0;
      for (std::size_t g = 0; g < sizes.size(); ++g)
        for (int j = 0; j < sizes[g]; ++j) groups[g].push_back(order[at++]);
      consider(groups);
    }
  }
  return finalize(instance, std::move(best), options.variance_floor);
}

Assignment allocate_channels(const NetworkInstance& instance,
                             const AllocationOptions& options) {
  PolygonPartition part = choose_partition(instance, options);
  Assignment assignment(instance.num_nodes(), instance.num_ues(),
                        instance.params().file_count,
                        instance.params().num_channels);
  for (std::size_t g = 0; g < part.groups.size(); ++g)
    for (int u : part.groups[g])
      assignment.set_channel(u, static_cast<int>(g) + 1, true);
  return assignment;
}

}  // namespace hetcache
