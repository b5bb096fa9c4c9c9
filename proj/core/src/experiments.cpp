#include "hetcache/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "hetcache/allocation.hpp"
#include "hetcache/caching.hpp"
#include "hetcache/solver.hpp"

namespace hetcache {

SystemConfig reference_config() {
  SystemConfig config;
  config.params = InstanceParams{};  // defaults carry the evaluation values
  config.num_ues = 22;
  config.num_sbs = 4;
  config.zipf_beta = 2.0;
  config.class_count = 3;
  return config;
}

SystemConfig tiny_config() {
  SystemConfig config;
  config.num_ues = 4;
  config.num_sbs = 1;
  config.params.cell_radius_m = 50.0;
  config.params.sbs_radius_m = 35.0;
  config.params.reference_distance_m = 10.0;
  config.params.num_channels = 2;
  config.params.file_count = 6;
  config.params.cache_mbs_bits = 200.0;
  config.params.cache_sbs_bits = 100.0;
  config.params.cache_ue_bits = 100.0;
  return config;
}

void apply_param(SystemConfig& config, const std::string& name, double value) {
  InstanceParams& p = config.params;
  if (name == "U")
    config.num_ues = static_cast<int>(value);
  else if (name == "S")
    config.num_sbs = static_cast<int>(value);
  else if (name == "W")
    p.num_channels = static_cast<int>(value);
  else if (name == "F")
    p.file_count = static_cast<int>(value);
  else if (name == "L")
    p.file_length_bits = value;
  else if (name == "C_U")
    p.cache_ue_bits = value;
  else if (name == "C_S")
    p.cache_sbs_bits = value;
  else if (name == "C_m")
    p.cache_mbs_bits = value;
  else if (name == "D_th")
    p.delay_threshold_slots = value;
  else if (name == "T0")
    p.backhaul_delay_slots = value;
  else if (name == "P_U")
    p.power_ue_w = value;
  else if (name == "P_S")
    p.power_sbs_w = value;
  else if (name == "P_m")
    p.power_mbs_w = value;
  else if (name == "beta")
    config.zipf_beta = value;
  else if (name == "B")
    p.bandwidth_hz = value;
  else if (name == "tau")
    p.slot_duration_s = value;
  else if (name == "alpha")
    p.path_loss_exponent = value;
  else if (name == "noise")
    p.noise_power_w = value;
  else if (name == "radius")
    p.cell_radius_m = value;
  else if (name == "sbs_radius")
    p.sbs_radius_m = value;
  else if (name == "d0")
    p.reference_distance_m = value;
  else
    throw std::invalid_argument("unknown parameter '" + name + "'");
}

std::vector<std::string> sweepable_params() {
  return {"U",   "S",   "W",   "F",     "L",     "C_U",  "C_S",
          "C_m", "D_th", "T0",  "P_U",   "P_S",   "P_m",  "beta",
          "B",   "tau", "alpha", "noise", "radius", "sbs_radius", "d0"};
}

Scenario build_scenario(const SystemConfig& config, std::uint64_t seed) {
  NetworkInstance instance =
      generate_instance(config.params, seed, config.num_ues, config.num_sbs);
  PopularityModel popularity =
      make_default_popularity(config.params.file_count, config.num_ues,
                              config.zipf_beta, seed, config.class_count);
  return Scenario{std::move(instance), std::move(popularity)};
}

namespace {

SweepRow run_point(const SystemConfig& config, double value,
                   std::uint64_t seed, const std::string& method) {
  SweepRow row;
  row.value = value;
  row.seed = seed;
  row.method = method;
  auto start = std::chrono::steady_clock::now();
  try {
    Scenario scenario = build_scenario(config, seed);
    DelayBoundTable bounds(scenario.instance);
    if (method == "optimal") {
      SolveResult solved =
          solve_exhaustive(scenario.instance, scenario.popularity, bounds);
      row.sdr = solved.sdr;
      row.mean_bound = evaluate_deliveries(scenario.instance,
                                           scenario.popularity,
                                           solved.assignment, bounds)
                           .weighted_mean_bound;
    } else {
      Assignment channels = allocate_channels(scenario.instance);
      PlacementResult placed =
          method == "no_d2d"
              ? baseline_no_d2d(scenario.instance, scenario.popularity,
                                channels, bounds)
              : place_all(scenario.instance, scenario.popularity, channels,
                          bounds);
      row.sdr = placed.sdr;
      row.mean_bound = evaluate_deliveries(scenario.instance,
                                           scenario.popularity,
                                           placed.assignment, bounds)
                           .weighted_mean_bound;
    }
  } catch (const std::exception& err) {
    row.status = std::string("error: ") + err.what();
    row.sdr = std::nan("");
    row.mean_bound = std::nan("");
  }
  row.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return row;
}

}  // namespace

int sweep_worker_count() {
  if (const char* env = std::getenv("HETCACHE_WORKERS")) {
    int workers = std::atoi(env);
    if (workers >= 1) return workers;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.seeds.empty())
    throw std::invalid_argument("run_sweep: at least one seed");
  if (spec.values.empty())
    throw std::invalid_argument("run_sweep: at least one value");
  for (const std::string& method : spec.methods)
    if (method != "heuristic" && method != "no_d2d" && method != "optimal")
      throw std::invalid_argument("run_sweep: unknown method '" + method + "'");

  struct Job {
    SystemConfig config;
    double value;
    std::uint64_t seed;
    std::string method;
  };
  std::vector<Job> jobs;
  for (double value : spec.values) {
    SystemConfig config = spec.base;
    apply_param(config, spec.param, value);
    for (std::uint64_t seed : spec.seeds)
      for (const std::string& method : spec.methods)
        jobs.push_back({config, value, seed, method});
  }

  // Each point writes its own slot, so the output is identical whatever the
  // worker count.
  std::vector<SweepRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t at = next.fetch_add(1); at < jobs.size();
         at = next.fetch_add(1)) {
      const Job& job = jobs[at];
      rows[at] = run_point(job.config, job.value, job.seed, job.method);
    }
  };
  int workers = std::min<int>(sweep_worker_count(),
                              static_cast<int>(jobs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  return rows;
}

std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows) {
  std::map<std::pair<double, std::string>, std::vector<double>> groups;
  std::vector<std::pair<double, std::string>> order;
  for (const SweepRow& row : rows) {
    if (row.status != "ok") continue;
    auto key = std::make_pair(row.value, row.method);
    if (groups.find(key) == groups.end()) order.push_back(key);
    groups[key].push_back(row.sdr);
  }
  std::vector<SweepAggregate> out;
  for (const auto& key : order) {
    const auto& sdrs = groups[key];
    SweepAggregate agg;
    agg.value = key.first;
    agg.method = key.second;
    agg.seeds = static_cast<int>(sdrs.size());
    double mean = 0.0;
    for (double s : sdrs) mean += s;
    mean /= static_cast<double>(sdrs.size());
    agg.mean_sdr = mean;
    if (sdrs.size() > 1) {
      double ss = 0.0;
      for (double s : sdrs) ss += (s - mean) * (s - mean);
      agg.std_sdr = std::sqrt(ss / static_cast<double>(sdrs.size() - 1));
    }
    out.push_back(agg);
  }
  return out;
}

namespace {

std::string csv_num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// RFC-style quoting for the free-text status column.
std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows) {
  out << "# hetcache sweep v1\n";
  out << "# param=" << spec.param << "\n";
  out << "# seeds=" << spec.seeds.size() << "\n";
  SystemConfig defaults = reference_config();
  const InstanceParams& base = spec.base.params;
  const InstanceParams& ref = defaults.params;
  auto note = [&](const char* name, double have, double want) {
    if (have != want)
      out << "# override " << name << "=" << csv_num(have) << "\n";
  };
  note("U", spec.base.num_ues, defaults.num_ues);
  note("S", spec.base.num_sbs, defaults.num_sbs);
  note("W", base.num_channels, ref.num_channels);
  note("F", base.file_count, ref.file_count);
  note("L", base.file_length_bits, ref.file_length_bits);
  note("C_U", base.cache_ue_bits, ref.cache_ue_bits);
  note("C_S", base.cache_sbs_bits, ref.cache_sbs_bits);
  note("C_m", base.cache_mbs_bits, ref.cache_mbs_bits);
  note("D_th", base.delay_threshold_slots, ref.delay_threshold_slots);
  note("T0", base.backhaul_delay_slots, ref.backhaul_delay_slots);
  note("P_U", base.power_ue_w, ref.power_ue_w);
  note("P_S", base.power_sbs_w, ref.power_sbs_w);
  note("P_m", base.power_mbs_w, ref.power_mbs_w);
  note("beta", spec.base.zipf_beta, defaults.zipf_beta);
  note("B", base.bandwidth_hz, ref.bandwidth_hz);
  note("tau", base.slot_duration_s, ref.slot_duration_s);
  note("alpha", base.path_loss_exponent, ref.path_loss_exponent);
  note("noise", base.noise_power_w, ref.noise_power_w);
  note("radius", base.cell_radius_m, ref.cell_radius_m);
  note("sbs_radius", base.sbs_radius_m, ref.sbs_radius_m);
  note("d0", base.reference_distance_m, ref.reference_distance_m);

  out << "param,value,seed,method,sdr,mean_bound,runtime_s,status\n";
  for (const SweepRow& row : rows) {
    out << spec.param << "," << csv_num(row.value) << "," << row.seed << ","
        << row.method << "," << csv_num(row.sdr) << ","
        << csv_num(row.mean_bound) << "," << csv_num(row.runtime_s) << ","
        << csv_quote(row.status) << "\n";
  }
  for (const SweepAggregate& agg : aggregate_sweep(rows)) {
    out << spec.param << "," << csv_num(agg.value) << ",mean," << agg.method
        << "," << csv_num(agg.mean_sdr) << ",,," << "n=" << agg.seeds << "\n";
    out << spec.param << "," << csv_num(agg.value) << ",std," << agg.method
        << "," << csv_num(agg.std_sdr) << ",,," << "n=" << agg.seeds << "\n";
  }
}

std::vector<BoundValidationRow> run_bound_validation(
    const BoundValidationSpec& spec) {
  std::vector<BoundValidationRow> rows;
  auto push_rows = [&](const LinkBoundParams& link) {
    TrialConfig config;
    config.link = link;
    config.trials = spec.trials;
    config.max_slots = spec.max_slots;
    config.seed = spec.seed;
    DelaySample sample = sample_delay(config);
    for (int slots = 1; slots <= spec.max_slots; ++slots) {
      BoundValidationRow row;
      row.theta = link.theta;
      row.interferer_theta =
          link.interferer_thetas.empty() ? 0.0 : link.interferer_thetas[0];
      row.slots = slots;
      row.empirical = sample.exceedance(slots);
      row.standard_error = sample.exceedance_stderr(slots);
      row.bound = link.interferer_thetas.empty() ? zeta0(link, slots)
                                                 : zeta1(link, slots);
      row.margin =
          row.bound - (row.empirical - 3.0 * row.standard_error);
      row.violated = row.margin < 0.0;
      rows.push_back(row);
    }
  };

  for (double theta : spec.thetas) {
    LinkBoundParams link;
    link.theta = theta;
    link.load = spec.load;
    push_rows(link);
  }
  for (double interferer : spec.interferer_thetas) {
    LinkBoundParams link;
    link.theta = spec.interfered_link_theta;
    link.load = spec.load;
    link.interferer_thetas = {interferer};
    push_rows(link);
  }
  return rows;
}

void write_bound_validation_csv(std::ostream& out,
                                const std::vector<BoundValidationRow>& rows) {
  out << "theta,interferer_theta,T,empirical,stderr,bound,margin,violated\n";
  for (const BoundValidationRow& row : rows) {
    out << csv_num(row.theta) << "," << csv_num(row.interferer_theta) << ","
        << row.slots << "," << csv_num(row.empirical) << ","
        << csv_num(row.standard_error) << "," << csv_num(row.bound) << ","
        << csv_num(row.margin) << "," << (row.violated ? 1 : 0) << "\n";
  }
}

void write_zeta_curve_csv(std::ostream& out, const LinkBoundParams& params,
                          int max_slots) {
  out << "T,zeta\n";
  for (int slots = 1; slots <= max_slots; ++slots) {
    double z = params.interferer_thetas.empty() ? zeta0(params, slots)
                                                : zeta1(params, slots);
    out << slots << "," << csv_num(z) << "\n";
  }
}

void write_delivery_bounds_csv(std::ostream& out,
                               const NetworkInstance& instance,
                               const PopularityModel& popularity,
                               const DelayBoundTable& bounds,
                               const Assignment& assignment) {
  out << "user,file,popularity,bound_slots,delivered\n";
  double threshold = instance.params().delay_threshold_slots;
  for (int u = 1; u <= assignment.num_users(); ++u) {
    for (int f = 1; f <= assignment.num_files(); ++f) {
      double bound =
          delivery_bound(instance, popularity, bounds, assignment, u, f);
      out << u << "," << f << ","
          << csv_num(popularity.averaged_popularity(u, f)) << ","
          << csv_num(bound) << "," << (bound <= threshold ? 1 : 0) << "\n";
    }
  }
}

}  // namespace hetcache
