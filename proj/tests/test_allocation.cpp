#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "hetcache/allocation.hpp"
#include "hetcache/experiments.hpp"
#include "hetcache/rng.hpp"

using namespace hetcache;

namespace {

NetworkInstance crafted(std::vector<Point2> ue_positions, int num_channels) {
  InstanceParams p;
  p.num_channels = num_channels;
  std::vector<Point2> positions{{0.0, 0.0}};
  for (const Point2& pos : ue_positions) positions.push_back(pos);
  return NetworkInstance(p, 0, static_cast<int>(ue_positions.size()), 0,
                         positions);
}

}  // namespace

TEST_CASE("polygon perimeter conventions") {
  CHECK(polygon_perimeter({}) == 0.0);
  CHECK(polygon_perimeter({{3.0, 4.0}}) == 0.0);
  CHECK(polygon_perimeter({{0.0, 0.0}, {3.0, 4.0}}) == doctest::Approx(10.0));
  // unit equilateral triangle
  std::vector<Point2> triangle{
      {0.0, 0.0}, {1.0, 0.0}, {0.5, 0.8660254037844386}};
  CHECK(polygon_perimeter(triangle) == doctest::Approx(3.0));
  // square visited in angular order regardless of input order
  std::vector<Point2> square{{1.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  CHECK(polygon_perimeter(square) == doctest::Approx(4.0));
}

TEST_CASE("perimeter is invariant under point relabeling") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point2> pts;
    for (int i = 0; i < 5; ++i)
      pts.push_back({rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)});
    double reference = polygon_perimeter(pts);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      for (std::size_t i = pts.size(); i > 1; --i)
        std::swap(pts[i - 1], pts[rng.index(i)]);
      CHECK(polygon_perimeter(pts) ==
            doctest::Approx(reference).epsilon(1e-12));
    }
  }
}

TEST_CASE("partition enumeration matches the size profile") {
  // U=8, W=3 -> X=2, R'=2: sizes (3,3,2)
  auto partitions = enumerate_partitions(8, 3);
  CHECK(partitions.size() == partition_count(8, 3));
  std::set<std::vector<std::vector<int>>> unique;
  for (auto groups : partitions) {
    std::vector<int> sizes;
    std::set<int> members;
    for (auto& g : groups) {
      sizes.push_back(static_cast<int>(g.size()));
      for (int u : g) members.insert(u);
    }
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{2, 3, 3});
    CHECK(members.size() == 8);
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end());
    CHECK(unique.insert(groups).second);
  }
  // 8!/(3!3!2!)/2! = 280
  CHECK(partitions.size() == 280);
}

TEST_CASE("partition counts") {
  CHECK(partition_count(4, 2) == 3);      // two pairs
  CHECK(partition_count(3, 2) == 3);      // (2,1)
  CHECK(partition_count(6, 3) == 15);     // three pairs
  CHECK(partition_count(4, 4) == 1);      // singletons
  CHECK(partition_count(22, 3) > 10000);  // sampling regime
}

TEST_CASE("dedicated channels when W >= U") {
  NetworkInstance inst = crafted({{1, 0}, {2, 0}, {3, 0}}, 3);
  Assignment r = allocate_channels(inst);
  for (int u = 1; u <= 3; ++u) {
    CHECK(r.channel(u, u));
    CHECK(r.channel_of(u) == u);
  }
}

TEST_CASE("unit-square users pair across the diagonals") {
  // two channels, four users at square corners: nu prefers the diagonal
  // pairs (both perimeters 2*sqrt(2), variance zero)
  NetworkInstance inst = crafted({{10, 10}, {11, 10}, {10, 11}, {11, 11}}, 2);
  PolygonPartition part = choose_partition(inst);
  std::set<std::set<int>> groups;
  for (const auto& g : part.groups) groups.insert({g.begin(), g.end()});
  std::set<std::set<int>> diagonals{{1, 4}, {2, 3}};
  CHECK(groups == diagonals);
  CHECK(part.variance == doctest::Approx(0.0));
  CHECK(part.mean_perimeter == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("allocation satisfies the channel constraints by construction") {
  for (std::uint64_t seed : {1ULL, 5ULL, 9ULL}) {
    SystemConfig config = reference_config();
    config.num_ues = 10;
    Scenario sc = build_scenario(config, seed);
    Assignment r = allocate_channels(sc.instance);
    CHECK(check_assignment(sc.instance, r).empty());
    for (int u = 1; u <= 10; ++u) CHECK(r.channel_of(u) != 0);
  }
}

TEST_CASE("enumeration picks the global nu maximum at small scale") {
  for (std::uint64_t seed : {2ULL, 3ULL, 4ULL}) {
    SystemConfig config = reference_config();
    config.num_ues = 7;
    Scenario sc = build_scenario(config, seed);
    PolygonPartition chosen = choose_partition(sc.instance);
    double best = -1.0;
    for (const auto& groups : enumerate_partitions(7, 3))
      best = std::max(best, partition_nu(sc.instance, groups));
    CHECK(chosen.nu == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("sampling mode is deterministic and dominates fresh samples") {
  SystemConfig config = reference_config();
  config.num_ues = 22;
  Scenario sc = build_scenario(config, 6);
  CHECK(partition_count(22, 3) > 10000);
  PolygonPartition a = choose_partition(sc.instance);
  PolygonPartition b = choose_partition(sc.instance);
  CHECK(a.groups == b.groups);
  CHECK(a.nu == b.nu);
  // 200 random partitions from an unrelated stream should not beat the
  // 10000-sample argmax (ties aside, a regression here means the sampler
  // is not actually searching)
  Rng rng(1234);
  std::vector<int> order(22);
  for (int u = 1; u <= 22; ++u) order[u - 1] = u;
  int better = 0;
  for (int s = 0; s < 200; ++s) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.index(i)]);
    std::vector<std::vector<int>> groups(3);
    std::size_t at = 0;
    for (int g = 0; g < 3; ++g)
      for (int j = 0; j < (g == 0 ? 8 : 7); ++j)
        groups[g].push_back(order[at++]);
    if (partition_nu(sc.instance, groups) > a.nu) ++better;
  }
  CHECK(better == 0);
}

TEST_CASE("partition invariants on the chosen result") {
  SystemConfig config = reference_config();
  config.num_ues = 10;
  Scenario sc = build_scenario(config, 13);
  PolygonPartition part = choose_partition(sc.instance);
  // U=10, W=3 -> one group of 4, two of 3
  std::vector<int> sizes;
  std::set<int> seen;
  for (const auto& g : part.groups) {
    sizes.push_back(static_cast<int>(g.size()));
    for (int u : g) CHECK(seen.insert(u).second);
  }
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<int>{3, 3, 4});
  CHECK(seen.size() == 10);
  CHECK(part.nu >= 0.0);
}

TEST_CASE("enumerate_partitions rejects W > U") {
  CHECK_THROWS_AS(enumerate_partitions(2, 3), std::invalid_argument);
}
