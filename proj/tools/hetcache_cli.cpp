// Batch front end: instance generation, parameter sweeps, tail-bound
// validation, exhaustive solving, ILP export and solution checking.
//
// Exit codes: 0 success, 1 usage error, 2 infeasible / size limit, 3
// internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hetcache/allocation.hpp"
#include "hetcache/caching.hpp"
#include "hetcache/experiments.hpp"
#include "hetcache/ilp.hpp"
#include "hetcache/io.hpp"
#include "hetcache/solver.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;

struct CommonOptions {
  std::string preset = "reference";
  std::string config_path;
  std::vector<std::string> overrides;
  std::string scenario_path;
  std::uint64_t seed = 1;
};

// JSON config schema: {"preset": "reference"|"tiny", "params": {"C_U": 200, ...}}
// with parameter names as in --set. Command-line --set wins over the file.
hetcache::SystemConfig config_from(const CommonOptions& opts) {
  std::string preset = opts.preset;
  std::vector<std::pair<std::string, double>> file_params;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in)
      throw std::runtime_error("cannot open config " + opts.config_path);
    nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.contains("preset")) preset = doc["preset"].get<std::string>();
    if (doc.contains("params"))
      for (const auto& [key, value] : doc["params"].items())
        file_params.emplace_back(key, value.get<double>());
  }
  if (preset != "reference" && preset != "tiny")
    throw std::runtime_error("unknown preset '" + preset + "'");
  hetcache::SystemConfig config =
      preset == "tiny" ? hetcache::tiny_config() : hetcache::reference_config();
  for (const auto& [key, value] : file_params)
    hetcache::apply_param(config, key, value);
  for (const std::string& kv : opts.overrides) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--set expects NAME=VALUE, got '" + kv + "'");
    hetcache::apply_param(config, kv.substr(0, eq),
                          std::stod(kv.substr(eq + 1)));
  }
  return config;
}

hetcache::Scenario scenario_from(const CommonOptions& opts) {
  if (!opts.scenario_path.empty())
    return hetcache::load_scenario(opts.scenario_path);
  return hetcache::build_scenario(config_from(opts), opts.seed);
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_scenario) {
  cmd->add_option("--preset", opts.preset, "parameter preset")
      ->check(CLI::IsMember({"reference", "tiny"}));
  cmd->add_option("--config", opts.config_path,
                  "JSON config file with preset and parameter overrides");
  cmd->add_option("--set", opts.overrides,
                  "override a parameter, e.g. --set C_U=200");
  cmd->add_option("--seed", opts.seed, "instance seed");
  if (with_scenario)
    cmd->add_option("--scenario", opts.scenario_path,
                    "load a saved scenario file instead of generating");
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(std::stod(item));
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hetcache: cache placement and channel allocation studies"};
  app.require_subcommand(1);

  CommonOptions gen_opts;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "generate a scenario file");
  add_common(gen, gen_opts, false);
  gen->add_option("--out", gen_out, "output path")->required();

  CommonOptions sweep_opts;
  std::string sweep_param, sweep_values, sweep_methods = "heuristic",
                           sweep_out;
  int sweep_seeds = 20;
  std::uint64_t sweep_seed0 = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep, sweep_opts, false);
  sweep->add_option("--param", sweep_param, "swept parameter name")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")
      ->required();
  sweep->add_option("--seeds", sweep_seeds, "number of seeds");
  sweep->add_option("--first-seed", sweep_seed0, "first seed of the range");
  sweep->add_option("--methods", sweep_methods,
                    "comma-separated subset of heuristic,no_d2d,optimal");
  sweep->add_option("--out", sweep_out, "output CSV path")->required();

  std::string vb_out, vb_curve_out;
  int vb_trials = 100000;
  std::uint64_t vb_seed = 7;
  double vb_curve_theta = 100.0, vb_curve_interferer = 0.0;
  int vb_curve_slots = 20;
  CLI::App* vb = app.add_subcommand(
      "validate-bounds", "tail-bound validity versus Monte Carlo sampling");
  vb->add_option("--trials", vb_trials, "trials per grid point");
  vb->add_option("--seed", vb_seed, "sampling seed");
  vb->add_option("--out", vb_out, "output CSV path");
  vb->add_option("--curve-out", vb_curve_out,
                 "also dump a (T, zeta) curve CSV here");
  vb->add_option("--curve-theta", vb_curve_theta, "curve link theta");
  vb->add_option("--curve-interferer", vb_curve_interferer,
                 "curve interferer theta (0 = none)");
  vb->add_option("--curve-slots", vb_curve_slots, "curve horizon in slots");

  CommonOptions solve_opts;
  solve_opts.preset = "tiny";
  std::string solve_out;
  std::uint64_t solve_limit = 100000000ULL;
  CLI::App* solve = app.add_subcommand(
      "solve-exact", "exhaustive search for the optimal assignment");
  add_common(solve, solve_opts, true);
  solve->add_option("--out", solve_out, "write the optimal assignment here");
  solve->add_option("--limit", solve_limit, "search-space refusal limit");

  CommonOptions ilp_opts;
  ilp_opts.preset = "tiny";
  std::string ilp_out;
  std::uint64_t ilp_cap = 2000000ULL;
  CLI::App* ilp =
      app.add_subcommand("emit-ilp", "export the linearized program (LP file)");
  add_common(ilp, ilp_opts, true);
  ilp->add_option("--out", ilp_out, "output LP path")->required();
  ilp->add_option("--max-variables", ilp_cap, "variable-count refusal cap");

  CommonOptions check_opts;
  check_opts.preset = "tiny";
  std::string check_assignment_path, check_bounds_out;
  CLI::App* check = app.add_subcommand(
      "check", "feasibility and objective of a saved assignment");
  add_common(check, check_opts, true);
  check
      ->add_option("--assignment", check_assignment_path,
                   "assignment file to verify")
      ->required();
  check->add_option("--bounds-out", check_bounds_out,
                    "dump per-(user,file) delay bounds as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      hetcache::Scenario scenario =
          hetcache::build_scenario(config_from(gen_opts), gen_opts.seed);
      hetcache::save_scenario(gen_out, scenario);
      std::cout << "wrote " << gen_out << " (U=" << scenario.instance.num_ues()
                << ", S=" << scenario.instance.num_sbs()
                << ", F=" << scenario.instance.params().file_count << ")\n";
      return kExitOk;
    }

    if (sweep->parsed()) {
      hetcache::SweepSpec spec;
      spec.base = config_from(sweep_opts);
      spec.param = sweep_param;
      spec.values = parse_values(sweep_values);
      for (int s = 0; s < sweep_seeds; ++s)
        spec.seeds.push_back(sweep_seed0 + static_cast<std::uint64_t>(s));
      std::stringstream methods(sweep_methods);
      std::string method;
      spec.methods.clear();
      while (std::getline(methods, method, ','))
        spec.methods.push_back(method);
      std::vector<hetcache::SweepRow> rows = hetcache::run_sweep(spec);
      std::ofstream out(sweep_out);
      if (!out) throw std::runtime_error("cannot write " + sweep_out);
      hetcache::write_sweep_csv(out, spec, rows);
      int failures = 0;
      for (const auto& row : rows)
        if (row.status != "ok") ++failures;
      std::cout << "wrote " << rows.size() << " rows to " << sweep_out;
      if (failures > 0) std::cout << " (" << failures << " failed points)";
      std::cout << "\n";
      return kExitOk;
    }

    if (vb->parsed()) {
      hetcache::BoundValidationSpec spec;
      spec.trials = vb_trials;
      spec.seed = vb_seed;
      if (!vb_curve_out.empty()) {
        hetcache::LinkBoundParams link;
        link.theta = vb_curve_theta;
        link.load = spec.load;
        if (vb_curve_interferer > 0.0)
          link.interferer_thetas.push_back(vb_curve_interferer);
        std::ofstream curve(vb_curve_out);
        if (!curve) throw std::runtime_error("cannot write " + vb_curve_out);
        hetcache::write_zeta_curve_csv(curve, link, vb_curve_slots);
      }
      std::vector<hetcache::BoundValidationRow> rows =
          hetcache::run_bound_validation(spec);
      if (!vb_out.empty()) {
        std::ofstream out(vb_out);
        if (!out) throw std::runtime_error("cannot write " + vb_out);
        hetcache::write_bound_validation_csv(out, rows);
      } else {
        hetcache::write_bound_validation_csv(std::cout, rows);
      }
      int violations = 0;
      for (const auto& row : rows)
        if (row.violated) ++violations;
      if (violations > 0) {
        std::cerr << violations << " grid points violate the bound\n";
        return kExitInfeasible;
      }
      return kExitOk;
    }

    if (solve->parsed()) {
      hetcache::Scenario scenario = scenario_from(solve_opts);
      hetcache::DelayBoundTable bounds(scenario.instance);
      hetcache::SolveLimits limits;
      limits.max_search_space = solve_limit;
      hetcache::SolveResult result = hetcache::solve_exhaustive(
          scenario.instance, scenario.popularity, bounds, limits);
      std::cout << "optimal sdr = " << result.sdr
                << " (explored " << result.nodes_explored << " states in "
                << result.elapsed_seconds << " s)\n";
      if (!solve_out.empty())
        hetcache::save_assignment(solve_out, result.assignment);
      return kExitOk;
    }

    if (ilp->parsed()) {
      hetcache::Scenario scenario = scenario_from(ilp_opts);
      hetcache::DelayBoundTable bounds(scenario.instance);
      hetcache::IlpOptions options;
      options.max_variables = ilp_cap;
      hetcache::IlpStats stats = hetcache::emit_ilp(
          scenario.instance, scenario.popularity, bounds, ilp_out, options);
      std::cout << "wrote " << ilp_out << " with " << stats.variables
                << " variables, " << stats.constraints << " constraints\n";
      return kExitOk;
    }

    if (check->parsed()) {
      hetcache::Scenario scenario = scenario_from(check_opts);
      hetcache::Assignment assignment =
          hetcache::load_assignment(check_assignment_path);
      hetcache::DelayBoundTable bounds(scenario.instance);
      hetcache::CheckReport report = hetcache::check_solution(
          scenario.instance, scenario.popularity, bounds, assignment);
      if (!check_bounds_out.empty()) {
        std::ofstream out(check_bounds_out);
        if (!out) throw std::runtime_error("cannot write " + check_bounds_out);
        hetcache::write_delivery_bounds_csv(out, scenario.instance,
                                            scenario.popularity, bounds,
                                            assignment);
      }
      std::cout << "objective = " << report.objective << "\n";
      for (const auto& v : report.violations)
        std::cout << "violation [" << v.constraint << "] " << v.detail
                  << " (slack " << v.slack << ")\n";
      if (!report.violations.empty()) {
        std::cout << report.violations.size() << " violations\n";
        return kExitInfeasible;
      }
      std::cout << "feasible\n";
      return kExitOk;
    }
  } catch (const hetcache::SearchSpaceExceeded& err) {
    std::cerr << "refused: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const hetcache::IlpSizeExceeded& err) {
    std::cerr << "refused: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
