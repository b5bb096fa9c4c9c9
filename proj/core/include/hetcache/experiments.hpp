#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hetcache/io.hpp"
#include "hetcache/montecarlo.hpp"

namespace hetcache {

// Full experiment configuration: instance parameters plus the request model.
struct SystemConfig {
  InstanceParams params;
  int num_ues = 22;
  int num_sbs = 4;
  double zipf_beta = 2.0;
  int class_count = 3;
};

// The fixed parameter set used throughout the evaluation section: one macro
// cell of radius 100 m, 4 small stations within 71 m, W=3 channels of 1 MHz,
// alpha=3, tau=10 ms, backhaul 10 slots, threshold 5 slots, F=100 files of
// 100 bits, caches 500/200/100 bits, beta=2, K=3, powers 1/0.5/0.1 W over
// 0.01 W noise.
SystemConfig reference_config();

// Reduced geometry for exhaustive-solver studies: everything close enough
// that links deliver in a handful of slots, and capacities that force real
// placement choices (cell 50 m, SBS ring 35 m, d0 = 10 m, caches 200/100/100
// bits, F=6, W=2, S=1, U=4).
SystemConfig tiny_config();

// Parameter names accepted by sweeps and the CLI: U, S, W, F, L, C_U, C_S,
// C_m, D_th, T0, P_U, P_S, P_m, beta, B, tau, alpha, noise, radius,
// sbs_radius, d0.
void apply_param(SystemConfig& config, const std::string& name, double value);
std::vector<std::string> sweepable_params();

Scenario build_scenario(const SystemConfig& config, std::uint64_t seed);

struct SweepSpec {
  SystemConfig base;
  std::string param;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> methods = {"heuristic"};  // heuristic|no_d2d|optimal
};

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string method;
  double sdr = 0.0;
  double mean_bound = 0.0;  // popularity-weighted mean of the delay bounds
  double runtime_s = 0.0;
  std::string status = "ok";
};

// One row per (value, seed, method), ordered exactly that way. Failures are
// recorded in the row status and the sweep continues. Points run in parallel
// when HETCACHE_WORKERS (or the hardware) allows; row order and content do
// not depend on the worker count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Worker count for sweep execution: HETCACHE_WORKERS when set, otherwise the
// hardware concurrency, at least 1.
int sweep_worker_count();

// Per-(value, method) mean and sample standard deviation of SDR across seeds.
struct SweepAggregate {
  double value = 0.0;
  std::string method;
  double mean_sdr = 0.0;
  double std_sdr = 0.0;
  int seeds = 0;
};
std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows);

// CSV emission: '#' metadata rows, a header, data rows, aggregate rows.
// Identical inputs give byte-identical output except the runtime column.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

struct BoundValidationSpec {
  std::vector<double> thetas = {1.0, 10.0, 100.0, 1000.0};
  std::vector<double> interferer_thetas = {1.0, 10.0, 100.0};  // paired with theta=100
  double interfered_link_theta = 100.0;
  double load = 0.01;
  int max_slots = 10;
  int trials = 100000;
  std::uint64_t seed = 7;
};

struct BoundValidationRow {
  double theta = 0.0;
  double interferer_theta = 0.0;  // 0 for the interference-free rows
  int slots = 0;
  double empirical = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - (empirical - 3 stderr)
  bool violated = false;
};

// Tail-bound validity grid: every row must satisfy
// bound >= empirical - 3 * stderr.
std::vector<BoundValidationRow> run_bound_validation(
    const BoundValidationSpec& spec);
void write_bound_validation_csv(std::ostream& out,
                                const std::vector<BoundValidationRow>& rows);

// (T, zeta) curve dump for plotting a bound against its simulation.
void write_zeta_curve_csv(std::ostream& out, const LinkBoundParams& params,
                          int max_slots);

// Per-(user, file) delivery-delay bounds and delivery flags of an
// assignment, one CSV row each.
void write_delivery_bounds_csv(std::ostream& out,
                               const NetworkInstance& instance,
                               const PopularityModel& popularity,
                               const DelayBoundTable& bounds,
                               const Assignment& assignment);

}  // namespace hetcache
