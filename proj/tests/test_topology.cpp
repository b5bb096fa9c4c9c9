#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "hetcache/topology.hpp"

using namespace hetcache;

namespace {

InstanceParams reference_params() { return InstanceParams{}; }

}  // namespace

TEST_CASE("generate places the default layout") {
  NetworkInstance inst = generate_instance(reference_params(), 0, 22, 4);
  CHECK(inst.num_nodes() == 27);
  CHECK(inst.num_ues() == 22);
  CHECK(inst.num_sbs() == 4);
  const Point2& mbs = inst.position(mbs_node());
  CHECK(mbs.x == 0.0);
  CHECK(mbs.y == 0.0);
  for (int u = 1; u <= 22; ++u) {
    const Point2& p = inst.position(ue_node(u));
    CHECK(std::hypot(p.x, p.y) <= 100.0);
  }
  for (int s = 1; s <= 4; ++s) {
    const Point2& p = inst.position(sbs_node(s));
    CHECK(std::hypot(p.x, p.y) <= 71.0);
  }
}

TEST_CASE("minimal instance is MBS plus one UE") {
  NetworkInstance inst = generate_instance(reference_params(), 3, 1, 0);
  CHECK(inst.num_nodes() == 2);
  CHECK(inst.node_at(0) == mbs_node());
  CHECK(inst.node_at(1) == ue_node(1));
}

TEST_CASE("generation is deterministic in the seed") {
  NetworkInstance a = generate_instance(reference_params(), 42, 10, 3);
  NetworkInstance b = generate_instance(reference_params(), 42, 10, 3);
  NetworkInstance c = generate_instance(reference_params(), 43, 10, 3);
  bool identical = true, differs = false;
  for (int ord = 0; ord < a.num_nodes(); ++ord) {
    identical = identical &&
                a.position(a.node_at(ord)).x == b.position(b.node_at(ord)).x &&
                a.position(a.node_at(ord)).y == b.position(b.node_at(ord)).y;
    differs =
        differs || a.position(a.node_at(ord)).x != c.position(c.node_at(ord)).x;
  }
  CHECK(identical);
  CHECK(differs);
}

TEST_CASE("minimum separation holds") {
  NetworkInstance inst = generate_instance(reference_params(), 7, 22, 4);
  for (int i = 0; i < inst.num_nodes(); ++i)
    for (int j = i + 1; j < inst.num_nodes(); ++j)
      CHECK(inst.distance(inst.node_at(i), inst.node_at(j)) >= 1.0);
}

TEST_CASE("invalid generation parameters are rejected") {
  CHECK_THROWS_AS(generate_instance(reference_params(), 0, 0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_instance(reference_params(), 0, 4, -1),
                  std::invalid_argument);
  InstanceParams bad = reference_params();
  bad.cell_radius_m = -5.0;
  CHECK_THROWS_AS(generate_instance(bad, 0, 4, 1), std::invalid_argument);
  bad = reference_params();
  bad.path_loss_exponent = 1.5;
  CHECK_THROWS_AS(generate_instance(bad, 0, 4, 1), std::invalid_argument);
  bad = reference_params();
  bad.cache_ue_bits = 300.0;  // above the SBS capacity
  CHECK_THROWS_AS(generate_instance(bad, 0, 4, 1), std::invalid_argument);
}

TEST_CASE("distance is a 3-4-5 triangle on crafted positions") {
  InstanceParams p = reference_params();
  std::vector<Point2> positions{{0.0, 0.0}, {30.0, 40.0}};
  NetworkInstance inst(p, 0, 1, 0, positions);
  CHECK(inst.distance(mbs_node(), ue_node(1)) == doctest::Approx(50.0));
  CHECK(inst.distance(ue_node(1), ue_node(1)) == 0.0);
}

TEST_CASE("distance is symmetric") {
  NetworkInstance inst = generate_instance(reference_params(), 5, 10, 4);
  for (int i = 0; i < inst.num_nodes(); ++i)
    for (int j = 0; j < inst.num_nodes(); ++j)
      CHECK(inst.distance(inst.node_at(i), inst.node_at(j)) ==
            inst.distance(inst.node_at(j), inst.node_at(i)));
}

TEST_CASE("unknown node ids are rejected") {
  NetworkInstance inst = generate_instance(reference_params(), 5, 4, 2);
  CHECK_THROWS_AS(inst.distance(ue_node(5), ue_node(1)), std::out_of_range);
  CHECK_THROWS_AS(inst.position(sbs_node(3)), std::out_of_range);
}

TEST_CASE("theta matches hand-computed path loss") {
  InstanceParams p = reference_params();
  p.power_mbs_w = 1.0;
  p.noise_power_w = 0.01;
  p.path_loss_exponent = 3.0;
  p.reference_distance_m = 1.0;

  SUBCASE("unit path loss at the reference distance") {
    std::vector<Point2> positions{{0.0, 0.0}, {1.0, 0.0}};
    NetworkInstance inst(p, 0, 1, 0, positions);
    CHECK(inst.theta(mbs_node(), ue_node(1)) == doctest::Approx(100.0));
  }
  SUBCASE("doubling the distance with alpha=3 divides by 8") {
    std::vector<Point2> positions{{0.0, 0.0}, {2.0, 0.0}};
    NetworkInstance inst(p, 0, 1, 0, positions);
    CHECK(inst.theta(mbs_node(), ue_node(1)) == doctest::Approx(12.5));
  }
}

TEST_CASE("theta rejects coincident endpoints") {
  NetworkInstance inst = generate_instance(reference_params(), 5, 4, 2);
  CHECK_THROWS_AS(inst.theta(ue_node(1), ue_node(1)), std::invalid_argument);
}

TEST_CASE("theta decreases with distance and scales with power and noise") {
  NetworkInstance inst = generate_instance(reference_params(), 11, 12, 4);
  // monotone decrease in distance, fixed transmitter kind
  std::vector<std::pair<double, double>> by_distance;
  for (int u = 1; u <= 12; ++u)
    by_distance.emplace_back(inst.distance(mbs_node(), ue_node(u)),
                             inst.theta(mbs_node(), ue_node(u)));
  std::sort(by_distance.begin(), by_distance.end());
  for (std::size_t i = 1; i < by_distance.size(); ++i)
    CHECK(by_distance[i].second <= by_distance[i - 1].second);

  // exact arithmetic scaling in P and sigma0^2
  InstanceParams scaled = inst.params();
  scaled.power_mbs_w *= 2.0;
  scaled.noise_power_w *= 4.0;
  std::vector<Point2> positions;
  for (int ord = 0; ord < inst.num_nodes(); ++ord)
    positions.push_back(inst.position(inst.node_at(ord)));
  NetworkInstance other(scaled, inst.seed(), inst.num_ues(), inst.num_sbs(),
                        positions);
  for (int u = 1; u <= 12; ++u)
    CHECK(other.theta(mbs_node(), ue_node(u)) ==
          doctest::Approx(inst.theta(mbs_node(), ue_node(u)) * 2.0 / 4.0)
              .epsilon(1e-12));
}

TEST_CASE("cache slots floor the capacity over the file length") {
  NetworkInstance inst = generate_instance(reference_params(), 0, 4, 2);
  CHECK(inst.cache_slots(mbs_node()) == 5);
  CHECK(inst.cache_slots(sbs_node(1)) == 2);
  CHECK(inst.cache_slots(ue_node(1)) == 1);
  CHECK(inst.load() == doctest::Approx(0.01));
  CHECK(inst.reuse_limit() == 2);  // ceil(4/3)
}
