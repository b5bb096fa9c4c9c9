#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "hetcache/experiments.hpp"

using namespace hetcache;

TEST_CASE("the default preset carries the evaluation parameters") {
  SystemConfig config = reference_config();
  CHECK(config.num_ues == 22);
  CHECK(config.num_sbs == 4);
  CHECK(config.params.num_channels == 3);
  CHECK(config.params.bandwidth_hz == doctest::Approx(1e6));
  CHECK(config.params.path_loss_exponent == doctest::Approx(3.0));
  CHECK(config.params.slot_duration_s == doctest::Approx(0.01));
  CHECK(config.params.backhaul_delay_slots == doctest::Approx(10.0));
  CHECK(config.params.delay_threshold_slots == doctest::Approx(5.0));
  CHECK(config.params.file_count == 100);
  CHECK(config.params.file_length_bits == doctest::Approx(100.0));
  CHECK(config.params.cache_mbs_bits == doctest::Approx(500.0));
  CHECK(config.params.cache_sbs_bits == doctest::Approx(200.0));
  CHECK(config.params.cache_ue_bits == doctest::Approx(100.0));
  CHECK(config.zipf_beta == doctest::Approx(2.0));
  CHECK(config.class_count == 3);
  CHECK(config.params.power_mbs_w == doctest::Approx(1.0));
  CHECK(config.params.power_sbs_w == doctest::Approx(0.5));
  CHECK(config.params.power_ue_w == doctest::Approx(0.1));
  CHECK(config.params.noise_power_w == doctest::Approx(0.01));
  CHECK(config.params.cell_radius_m == doctest::Approx(100.0));
  CHECK(config.params.sbs_radius_m == doctest::Approx(71.0));
  // normalized load L/(tau B) = 0.01
  CHECK(config.params.file_length_bits /
            (config.params.slot_duration_s * config.params.bandwidth_hz) ==
        doctest::Approx(0.01));
}

TEST_CASE("apply_param maps every sweepable name") {
  SystemConfig config = reference_config();
  for (const std::string& name : sweepable_params())
    CHECK_NOTHROW(apply_param(config, name, 2.0));
  CHECK_THROWS_AS(apply_param(config, "bogus", 1.0), std::invalid_argument);
  apply_param(config, "C_U", 150.0);
  CHECK(config.params.cache_ue_bits == 150.0);
  apply_param(config, "U", 7.0);
  CHECK(config.num_ues == 7);
}

TEST_CASE("sweep specs are validated") {
  SweepSpec spec;
  spec.base = tiny_config();
  spec.param = "C_U";
  spec.values = {0.0};
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);  // no seeds
  spec.seeds = {1};
  spec.values.clear();
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);  // no values
  spec.values = {0.0};
  spec.methods = {"gradient-descent"};
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);  // unknown method
}

TEST_CASE("run_sweep produces one row per point and stable aggregates") {
  SweepSpec spec;
  spec.base = tiny_config();
  spec.param = "C_U";
  spec.values = {0.0, 100.0};
  spec.seeds = {1, 2, 3};
  spec.methods = {"heuristic", "no_d2d"};
  auto rows = run_sweep(spec);
  CHECK(rows.size() == 2 * 3 * 2);
  // ordering: value-major, then seed, then method
  CHECK(rows[0].value == 0.0);
  CHECK(rows[0].seed == 1);
  CHECK(rows[0].method == "heuristic");
  CHECK(rows[1].method == "no_d2d");
  CHECK(rows[2].seed == 2);
  for (const auto& row : rows) {
    CHECK(row.status == "ok");
    CHECK(row.sdr >= 0.0);
    CHECK(row.sdr <= 1.0);
  }
  auto aggregates = aggregate_sweep(rows);
  CHECK(aggregates.size() == 4);  // 2 values x 2 methods
  for (const auto& agg : aggregates) CHECK(agg.seeds == 3);
}

TEST_CASE("per-point failures are recorded and the sweep continues") {
  SweepSpec spec;
  spec.base = tiny_config();
  spec.param = "U";
  // U=0 cannot be generated; U=2 is fine
  spec.values = {0.0, 2.0};
  spec.seeds = {1};
  auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].status != "ok");
  CHECK(std::isnan(rows[0].sdr));
  CHECK(rows[1].status == "ok");
}

TEST_CASE("csv output is deterministic apart from the runtime column") {
  SweepSpec spec;
  spec.base = tiny_config();
  spec.param = "D_th";
  spec.values = {2.0, 5.0};
  spec.seeds = {4, 5};
  auto rows_a = run_sweep(spec);
  auto rows_b = run_sweep(spec);
  auto render = [&](const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    write_sweep_csv(out, spec, rows);
    // blank the runtime column (second to last)
    std::string text = out.str(), filtered;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      std::size_t cut_end = line.rfind(',');
      if (cut_end != std::string::npos && line[0] != '#') {
        std::size_t cut_start = line.rfind(',', cut_end - 1);
        if (cut_start != std::string::npos)
          line = line.substr(0, cut_start) + line.substr(cut_end);
      }
      filtered += line + "\n";
    }
    return filtered;
  };
  CHECK(render(rows_a) == render(rows_b));

  std::ostringstream out;
  write_sweep_csv(out, spec, rows_a);
  std::string text = out.str();
  CHECK(text.find("param,value,seed,method,sdr,mean_bound,runtime_s,status") !=
        std::string::npos);
  CHECK(text.find("# param=D_th") != std::string::npos);
  CHECK(text.find("# override") != std::string::npos);  // tiny preset differs
  CHECK(text.find(",mean,") != std::string::npos);
  CHECK(text.find(",std,") != std::string::npos);
}

TEST_CASE("bound validation grid has no violations") {
  BoundValidationSpec spec;
  spec.trials = 20000;  // the full 1e5 grid runs in the acceptance suite
  spec.max_slots = 6;
  auto rows = run_bound_validation(spec);
  CHECK(rows.size() == (4 + 3) * 6);
  for (const auto& row : rows) {
    CHECK(!row.violated);
    CHECK(row.bound >= 0.0);
    CHECK(row.bound <= 1.0);
    CHECK(row.empirical >= 0.0);
  }
  // zeta1 rows dominate the matching zeta0 rows pointwise (theta=100)
  for (const auto& interfered : rows) {
    if (interfered.interferer_theta == 0.0 || interfered.theta != 100.0)
      continue;
    for (const auto& free_row : rows) {
      if (free_row.interferer_theta == 0.0 && free_row.theta == 100.0 &&
          free_row.slots == interfered.slots)
        CHECK(interfered.bound >= free_row.bound - 1e-12);
    }
  }
  std::ostringstream out;
  write_bound_validation_csv(out, rows);
  CHECK(out.str().find("theta,interferer_theta,T,empirical,stderr,bound,"
                       "margin,violated") != std::string::npos);
}

TEST_CASE("zeta curve dump") {
  LinkBoundParams params;
  params.theta = 10.0;
  params.load = 0.01;
  std::ostringstream out;
  write_zeta_curve_csv(out, params, 5);
  std::string text = out.str();
  CHECK(text.find("T,zeta") != std::string::npos);
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 6);
}

TEST_CASE("worker count honors the environment override") {
  setenv("HETCACHE_WORKERS", "3", 1);
  CHECK(sweep_worker_count() == 3);
  setenv("HETCACHE_WORKERS", "0", 1);  // invalid, fall back to hardware
  CHECK(sweep_worker_count() >= 1);
  unsetenv("HETCACHE_WORKERS");
  CHECK(sweep_worker_count() >= 1);

  // a multi-threaded sweep returns the same rows as a sequential one
  SweepSpec spec;
  spec.base = tiny_config();
  spec.param = "C_U";
  spec.values = {0.0, 100.0};
  spec.seeds = {1, 2};
  setenv("HETCACHE_WORKERS", "4", 1);
  auto parallel = run_sweep(spec);
  setenv("HETCACHE_WORKERS", "1", 1);
  auto sequential = run_sweep(spec);
  unsetenv("HETCACHE_WORKERS");
  REQUIRE(parallel.size() == sequential.size());
  for (std::size_t i = 0; i < parallel.size(); ++i) {
    CHECK(parallel[i].sdr == sequential[i].sdr);
    CHECK(parallel[i].seed == sequential[i].seed);
    CHECK(parallel[i].method == sequential[i].method);
  }
}

TEST_CASE("the user-power sweep runs end to end") {
  // levels are instance-specific (the mid-power dip is real but not
  // universal), so only the plumbing is asserted
  SweepSpec spec;
  spec.base = tiny_config();
  spec.param = "P_U";
  spec.values = {0.1, 0.5, 1.0};
  spec.seeds = {1, 2, 3};
  auto rows = run_sweep(spec);
  CHECK(rows.size() == 9);
  for (const auto& row : rows) {
    CHECK(row.status == "ok");
    CHECK(row.sdr >= 0.0);
    CHECK(row.sdr <= 1.0);
  }
}

TEST_CASE("scenario construction is deterministic per seed") {
  Scenario a = build_scenario(tiny_config(), 3);
  Scenario b = build_scenario(tiny_config(), 3);
  CHECK(a.instance.position(ue_node(1)).x == b.instance.position(ue_node(1)).x);
  CHECK(a.popularity.rank(1, 1) == b.popularity.rank(1, 1));
}
