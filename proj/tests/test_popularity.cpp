#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hetcache/popularity.hpp"

using namespace hetcache;

TEST_CASE("zipf probabilities: closed forms and limits") {
  SUBCASE("beta = 0 is uniform") {
    PopularityModel model(5, 0.0, identity_ranks(5, 1), {{1.0}});
    for (int f = 1; f <= 5; ++f)
      CHECK(model.zipf_prob(f, 1) == doctest::Approx(0.2).epsilon(1e-14));
  }
  SUBCASE("F=3, beta=2, natural ranking") {
    PopularityModel model(3, 2.0, identity_ranks(3, 1), {{1.0}});
    CHECK(model.zipf_prob(1, 1) == doctest::Approx(36.0 / 49.0).epsilon(1e-15));
    CHECK(model.zipf_prob(2, 1) == doctest::Approx(9.0 / 49.0).epsilon(1e-15));
    CHECK(model.zipf_prob(3, 1) == doctest::Approx(4.0 / 49.0).epsilon(1e-15));
  }
  SUBCASE("rows sum to one at F=100") {
    PopularityModel model = make_default_popularity(100, 4, 2.0, 9);
    for (int k = 1; k <= model.class_count(); ++k) {
      double sum = 0.0;
      for (int f = 1; f <= 100; ++f) sum += model.zipf_prob(f, k);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("zipf index validation") {
  PopularityModel model = make_default_popularity(10, 2, 2.0, 1);
  CHECK_THROWS_AS(model.zipf_prob(0, 1), std::out_of_range);
  CHECK_THROWS_AS(model.zipf_prob(11, 1), std::out_of_range);
  CHECK_THROWS_AS(model.zipf_prob(1, 4), std::out_of_range);
  CHECK_THROWS_AS(model.averaged_popularity(3, 1), std::out_of_range);
}

TEST_CASE("averaged popularity mixes classes") {
  SUBCASE("single class degenerates to zipf") {
    PopularityModel model(4, 1.0, identity_ranks(4, 1), {{1.0}, {1.0}});
    for (int f = 1; f <= 4; ++f)
      CHECK(model.averaged_popularity(2, f) ==
            doctest::Approx(model.zipf_prob(f, 1)));
  }
  SUBCASE("identical rankings collapse the mixture") {
    PopularityModel model(6, 2.0, identity_ranks(6, 3), {{0.3, 0.5, 0.2}});
    for (int f = 1; f <= 6; ++f)
      CHECK(model.averaged_popularity(1, f) ==
            doctest::Approx(model.zipf_prob(f, 1)).epsilon(1e-14));
  }
  SUBCASE("rows of Q sum to one under the default preset") {
    PopularityModel model = make_default_popularity(10, 6, 2.0, 4);
    for (int u = 1; u <= 6; ++u) {
      double sum = 0.0;
      for (int f = 1; f <= 10; ++f) sum += model.averaged_popularity(u, f);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("file metric sums user popularity") {
  SUBCASE("single user") {
    PopularityModel model = make_default_popularity(8, 1, 2.0, 2);
    for (int f = 1; f <= 8; ++f)
      CHECK(model.file_metric(f) == doctest::Approx(model.averaged_popularity(1, f)));
  }
  SUBCASE("total mass is U") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      PopularityModel model = make_default_popularity(30, 7, 1.2, seed);
      double total = 0.0;
      for (int f = 1; f <= 30; ++f) total += model.file_metric(f);
      CHECK(total == doctest::Approx(7.0).epsilon(1e-9));
    }
  }
  SUBCASE("identical users induce the ranking of averaged zipf") {
    std::vector<std::vector<double>> probs(3, {0.3, 0.5, 0.2});
    PopularityModel model(5, 2.0, random_ranks(5, 3, 17), probs);
    auto order = model.files_by_metric();
    for (std::size_t i = 1; i < order.size(); ++i)
      CHECK(model.averaged_popularity(1, order[i - 1]) >=
            model.averaged_popularity(1, order[i]));
  }
}

TEST_CASE("default class membership follows the mod-3 preset") {
  CHECK(default_class_probs(3) == std::vector<double>{0.3, 0.5, 0.2});
  CHECK(default_class_probs(4) == std::vector<double>{0.2, 0.3, 0.5});
  CHECK(default_class_probs(5) == std::vector<double>{0.5, 0.2, 0.3});
  CHECK(default_class_probs(6) == std::vector<double>{0.3, 0.5, 0.2});
  for (int u = 1; u <= 9; ++u) {
    double sum = 0.0;
    for (double p : default_class_probs(u)) sum += p;
    CHECK(sum == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(default_class_probs(1, 4), std::invalid_argument);
}

TEST_CASE("skew concentrates mass on the top-ranked file") {
  // the rank-1 file gains probability as beta grows
  PopularityModel flat(50, 0.5, identity_ranks(50, 1), {{1.0}});
  PopularityModel skewed(50, 2.5, identity_ranks(50, 1), {{1.0}});
  CHECK(skewed.zipf_prob(1, 1) >= flat.zipf_prob(1, 1));
}

TEST_CASE("model construction rejects malformed inputs") {
  CHECK_THROWS_AS(PopularityModel(3, 2.0, {{1, 1, 2}}, {{1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PopularityModel(3, 2.0, identity_ranks(3, 1), {{0.4, 0.4}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PopularityModel(3, -1.0, identity_ranks(3, 1), {{1.0}}),
                  std::invalid_argument);
  std::vector<std::vector<double>> bad_row{{0.7, 0.7, -0.4}};
  CHECK_THROWS_AS(PopularityModel(3, 2.0, identity_ranks(3, 3), bad_row),
                  std::invalid_argument);
}

TEST_CASE("random rank permutations are valid and seed-stable") {
  auto a = random_ranks(20, 3, 5);
  auto b = random_ranks(20, 3, 5);
  CHECK(a == b);
  for (const auto& row : a) {
    std::vector<bool> seen(21, false);
    for (int r : row) {
      CHECK(r >= 1);
      CHECK(r <= 20);
      CHECK(!seen[r]);
      seen[r] = true;
    }
  }
  CHECK(random_ranks(20, 3, 6) != a);
}
