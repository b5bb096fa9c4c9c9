#include "hetcache/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

namespace hetcache {

namespace {

// Unlabeled partitions of users 1..U into at most W groups of size <= R,
// in canonical (restricted-growth) order.
void enumerate_channel_partitions(
    int num_users, int num_groups, int reuse_limit,
    const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
  std::vector<std::vector<int>> groups;
  std::function<void(int)> rec = [&](int user) {
    if (user > num_users) {
      visit(groups);
      return;
    }
    // index loop: the recursion below may grow the vector
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (static_cast<int>(groups[g].size()) >= reuse_limit) continue;
      groups[g].push_back(user);
      rec(user + 1);
      groups[g].pop_back();
    }
    if (static_cast<int>(groups.size()) < num_groups) {
      groups.push_back({user});
      rec(user + 1);
      groups.pop_back();
    }
  };
  rec(1);
}

// Capped count so that the pre-check itself stays cheap on instances that
// are far too large to solve anyway.
std::uint64_t count_channel_partitions(int num_users, int num_groups,
                                       int reuse_limit, std::uint64_t cap) {
  std::uint64_t count = 0;
  std::vector<int> fill;  // current group sizes
  std::function<void(int)> rec = [&](int user) {
    if (count >= cap) return;
    if (user > num_users) {
      ++count;
      return;
    }
    for (std::size_t g = 0; g < fill.size(); ++g) {
      if (fill[g] >= reuse_limit) continue;
      ++fill[g];
      rec(user + 1);
      --fill[g];
      if (count >= cap) return;
    }
    if (static_cast<int>(fill.size()) < num_groups) {
      fill.push_back(1);
      rec(user + 1);
      fill.pop_back();
    }
  };
  rec(1);
  return count;
}

struct PairState {
  bool decided = false;
  bool failed = false;
};

class PlacementSearch {
 public:
  PlacementSearch(const NetworkInstance& instance,
                  const PopularityModel& popularity,
                  const DelayBoundTable& bounds)
      : instance_(instance),
        popularity_(popularity),
        eval_(instance, popularity, bounds),
        num_users_(instance.num_ues()),
        num_files_(instance.params().file_count),
        file_order_(popularity.files_by_metric()) {
    slots_.resize(instance.num_nodes());
    for (int ord = 0; ord < instance.num_nodes(); ++ord)
      slots_[ord] = instance.cache_slots(instance.node_at(ord));
  }

  void run(const std::vector<std::vector<int>>& groups) {
    Assignment channels(instance_.num_nodes(), num_users_, num_files_,
                        instance_.params().num_channels);
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (int u : groups[g])
        channels.set_channel(u, static_cast<int>(g) + 1, true);
    current_channels_ = channels;
    eval_.set_channels(channels);
    eval_.clear_caching();
    pairs_.assign(static_cast<std::size_t>(num_users_) * num_files_, {});
    failed_mass_ = 0.0;
    placement_.assign(num_files_ + 1, -2);  // -2 undecided, -1 uncached
    dfs(0);
  }

  double best_sdr() const { return best_sdr_; }
  bool found() const { return best_found_; }
  const Assignment& best_assignment() const { return best_assignment_; }
  std::uint64_t nodes_explored() const { return nodes_explored_; }

 private:
  std::size_t pair_index(int user, int file) const {
    return static_cast<std::size_t>(user - 1) * num_files_ + (file - 1);
  }

  // Evaluates every decided pair that could have been hurt by new
  // interference, plus all pairs of the newly decided file. Returns the
  // flipped pair indices so the caller can undo.
  std::vector<std::size_t> settle_pairs(int decided_file, bool added_mass) {
    std::vector<std::size_t> flipped;
    for (int u = 1; u <= num_users_; ++u) {
      std::size_t idx = pair_index(u, decided_file);
      pairs_[idx].decided = true;
      bool ok = eval_.deliverable(u, decided_file);
      if (!ok) {
        pairs_[idx].failed = true;
        failed_mass_ += popularity_.averaged_popularity(u, decided_file);
        flipped.push_back(idx);
      }
    }
    if (added_mass) {
      for (int u = 1; u <= num_users_; ++u) {
        for (int f = 1; f <= num_files_; ++f) {
          std::size_t idx = pair_index(u, f);
          if (!pairs_[idx].decided || pairs_[idx].failed || f == decided_file)
            continue;
          if (!eval_.deliverable(u, f)) {
            pairs_[idx].failed = true;
            failed_mass_ += popularity_.averaged_popularity(u, f);
            flipped.push_back(idx);
          }
        }
      }
    }
    return flipped;
  }

  void undo_pairs(int decided_file, const std::vector<std::size_t>& flipped) {
    for (std::size_t idx : flipped) {
      pairs_[idx].failed = false;
      int user = static_cast<int>(idx / num_files_) + 1;
      int file = static_cast<int>(idx % num_files_) + 1;
      failed_mass_ -= popularity_.averaged_popularity(user, file);
    }
    for (int u = 1; u <= num_users_; ++u)
      pairs_[pair_index(u, decided_file)].decided = false;
  }

  void dfs(int depth) {
    ++nodes_explored_;
    double upper =
        1.0 - failed_mass_ / static_cast<double>(num_users_);
    if (best_found_ && upper <= best_sdr_) return;

    if (depth == num_files_) {
      double sdr = upper;  // every pair decided, optimism is exact
      if (!best_found_ || sdr > best_sdr_) {
        best_found_ = true;
        best_sdr_ = sdr;
        best_assignment_ = current_channels_;
        for (int f = 1; f <= num_files_; ++f)
          if (placement_[f] >= 0)
            best_assignment_.set_cached(placement_[f], f, true);
        eval_.fill_deliveries(best_assignment_);
      }
      return;
    }

    int file = file_order_[depth];
    for (int ord = 0; ord < instance_.num_nodes(); ++ord) {
      if (slots_[ord] <= 0) continue;
      --slots_[ord];
      placement_[file] = ord;
      eval_.place(file, ord);
      auto flipped = settle_pairs(file, /*added_mass=*/true);
      dfs(depth + 1);
      undo_pairs(file, flipped);
      eval_.unplace(file, ord);
      placement_[file] = -2;
      ++slots_[ord];
    }
    // leave the file un-cached (served over the backhaul)
    placement_[file] = -1;
    auto flipped = settle_pairs(file, /*added_mass=*/false);
    dfs(depth + 1);
    undo_pairs(file, flipped);
    placement_[file] = -2;
  }

  const NetworkInstance& instance_;
  const PopularityModel& popularity_;
  DeliveryEvaluator eval_;
  int num_users_;
  int num_files_;
  std::vector<int> file_order_;
  std::vector<int> slots_;
  std::vector<PairState> pairs_;
  std::vector<int> placement_;
  double failed_mass_ = 0.0;
  Assignment current_channels_{1, 1, 1, 1};
  bool best_found_ = false;
  double best_sdr_ = -1.0;
  Assignment best_assignment_{1, 1, 1, 1};
  std::uint64_t nodes_explored_ = 0;
};

}  // namespace

std::uint64_t exhaustive_search_space(const NetworkInstance& instance) {
  std::uint64_t partitions = count_channel_partitions(
      instance.num_ues(), instance.params().num_channels,
      instance.reuse_limit(), /*cap=*/10'000'000);
  double log_placements =
      instance.params().file_count * std::log(instance.num_nodes() + 1.0);
  double log_total =
      std::log(static_cast<double>(std::max<std::uint64_t>(partitions, 1))) +
      log_placements;
  if (log_total > 43.0) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(
      std::llround(static_cast<double>(partitions) *
                   std::exp(log_placements)));
}

SolveResult solve_exhaustive(const NetworkInstance& instance,
                             const PopularityModel& popularity,
                             const DelayBoundTable& bounds,
                             const SolveLimits& limits) {
  std::uint64_t estimate = exhaustive_search_space(instance);
  if (estimate > limits.max_search_space)
    throw SearchSpaceExceeded(estimate, limits.max_search_space);

  auto start = std::chrono::steady_clock::now();
  PlacementSearch search(instance, popularity, bounds);
  enumerate_channel_partitions(
      instance.num_ues(), instance.params().num_channels,
      instance.reuse_limit(),
      [&](const std::vector<std::vector<int>>& groups) { search.run(groups); });

  if (!search.found())
    throw std::runtime_error("solve_exhaustive: no feasible assignment found");

  SolveResult result{search.best_assignment(), 0.0, search.nodes_explored(),
                     0.0};
  // Re-derive the reported SDR through the reference evaluator so callers
  // compare like with like.
  result.sdr =
      evaluate_deliveries(instance, popularity, result.assignment, bounds).sdr;
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

CheckReport check_solution(const NetworkInstance& instance,
                           const PopularityModel& popularity,
                           const DelayBoundTable& bounds,
                           const Assignment& assignment) {
  CheckReport report;
  report.violations = check_assignment(instance, assignment);

  DeliveryEvaluator eval(instance, popularity, bounds);
  eval.set_channels(assignment);
  bool caching_usable = true;
  for (int f = 1; f <= assignment.num_files(); ++f) {
    int cacher = -1;
    try {
      cacher = assignment.cacher_of(f);
    } catch (const std::invalid_argument&) {
      caching_usable = false;  // redundant copies already reported above
      break;
    }
    if (cacher >= 0) eval.place(f, cacher);
  }

  double threshold = instance.params().delay_threshold_slots;
  double objective = 0.0;
  for (int u = 1; u <= assignment.num_users(); ++u) {
    for (int f = 1; f <= assignment.num_files(); ++f) {
      if (!assignment.delivered(u, f)) continue;
      objective += popularity.averaged_popularity(u, f);
      if (!caching_usable) continue;
      double bound = eval.bound(u, f);
      if (bound > threshold)
        report.violations.push_back(
            {"delay-link",
             "pair (u=" + std::to_string(u) + ", f=" + std::to_string(f) +
                 ") marked delivered but bound " + std::to_string(bound) +
                 " exceeds threshold " + std::to_string(threshold),
             threshold - bound});
    }
  }
  report.objective = objective / static_cast<double>(assignment.num_users());
  return report;
}

}  // namespace hetcache
