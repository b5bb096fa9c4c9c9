#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetcache/delay_bounds.hpp"
#include "hetcache/delivery.hpp"
#include "hetcache/popularity.hpp"
#include "hetcache/topology.hpp"

namespace hetcache {

// Linearized integer program export in LP text format. Variable naming:
//   x_u{u}_f{f}        delivery indicators
//   c_n{i}_f{f}        caching placement, i = canonical node ordinal
//   r_u{u}_w{w}        channel allocation
//   phi_n{i}_f{f}      prefix products of (1 - c) over ordinals 0..i
//   phix_x{x}_n{i}_f{f} same with the sign flipped at ordinal x
//   rho_u{u}_v{k}_w{w} prefix products of the channel-exclusivity chain
//   rr_u{a}_v{b}_w{w}  r_{a,w} r_{b,w} with a < b
//   omg_u{u}_w{w}_f{f}          rho * phi
//   omgx_u{u}_w{w}_f{f}_x{x}    rho * phix
//   gam_u{u}_v{k}_w{w}_f{f}     rr * phi
//   gamx_u{u}_v{k}_w{w}_f{f}_x{x} rr * phix
//   lam_u{u}_v{k}_w{w}_f{f}_g{f'}_y{y}        gam * phix(y, f')
//   lamxy_u{u}_v{k}_w{w}_f{f}_g{f'}_x{x}_y{y} gamx * phix(y, f')
// Product variables are relaxed to [0, 1]; the triple inequalities force
// them to the binary product values once x, c, r are binary.

struct IlpOptions {
  std::uint64_t max_variables = 2'000'000;
};

struct IlpStats {
  std::uint64_t variables = 0;
  std::uint64_t constraints = 0;
};

class IlpSizeExceeded : public std::runtime_error {
 public:
  IlpSizeExceeded(std::uint64_t estimate, std::uint64_t limit)
      : std::runtime_error("ILP would hold ~" + std::to_string(estimate) +
                           " variables, over the configured cap of " +
                           std::to_string(limit)),
        estimate_(estimate) {}
  std::uint64_t estimate() const { return estimate_; }

 private:
  std::uint64_t estimate_;
};

// Closed-form variable count of the export below.
std::uint64_t ilp_variable_count(const NetworkInstance& instance);

IlpStats emit_ilp(const NetworkInstance& instance,
                  const PopularityModel& popularity,
                  const DelayBoundTable& bounds, const std::string& path,
                  const IlpOptions& options = {});

// Minimal LP-format model for the round-trip and substitution checks.
struct LpTerm {
  double coefficient = 0.0;
  std::string variable;
};

struct LpConstraint {
  std::string name;
  std::vector<LpTerm> terms;
  char sense = '<';  // '<' means <=, '>' means >=, '=' equality
  double rhs = 0.0;
};

struct LpModel {
  bool maximize = true;
  std::vector<LpTerm> objective;
  std::vector<LpConstraint> constraints;
  std::map<std::string, std::pair<double, double>> bounds;
  std::set<std::string> binaries;
  std::set<std::string> variables;
};

LpModel parse_lp_file(const std::string& path);

double lp_objective_value(const LpModel& model,
                          const std::map<std::string, double>& values);

struct LpViolation {
  std::string constraint;
  double violation = 0.0;  // positive amount by which the row is broken
};

// Constraint / bound / integrality check of a full variable valuation.
std::vector<LpViolation> lp_check_solution(
    const LpModel& model, const std::map<std::string, double>& values,
    double tolerance = 1e-6);

// Materializes every model variable (decision and auxiliary chains) from a
// binary assignment, for substitution into the emitted program.
std::map<std::string, double> ilp_variable_values(
    const NetworkInstance& instance, const Assignment& assignment);

}  // namespace hetcache
