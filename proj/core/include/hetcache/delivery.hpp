#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hetcache/delay_bounds.hpp"
#include "hetcache/popularity.hpp"
#include "hetcache/topology.hpp"

namespace hetcache {

// Decision triple: caching placement C (|C| x F), channel allocation R
// (U x W) and delivery indicators X (U x F). Node rows follow the instance's
// canonical ordinal ordering; users, files and channels are 1-based.
class Assignment {
 public:
  Assignment(int num_nodes, int num_users, int num_files, int num_channels);

  int num_nodes() const { return nodes_; }
  int num_users() const { return users_; }
  int num_files() const { return files_; }
  int num_channels() const { return channels_; }

  bool cached(int node_ord, int file) const {
    return caching_[idx_cf(node_ord, file)] != 0;
  }
  void set_cached(int node_ord, int file, bool value) {
    caching_[idx_cf(node_ord, file)] = value ? 1 : 0;
  }
  bool channel(int user, int chan) const {
    return channels_m_[idx_uw(user, chan)] != 0;
  }
  void set_channel(int user, int chan, bool value) {
    channels_m_[idx_uw(user, chan)] = value ? 1 : 0;
  }
  bool delivered(int user, int file) const {
    return delivery_[idx_uf(user, file)] != 0;
  }
  void set_delivered(int user, int file, bool value) {
    delivery_[idx_uf(user, file)] = value ? 1 : 0;
  }

  // channel carrying transmissions toward this user, or 0 if none is set
  int channel_of(int user) const;
  // node ordinal caching the file, or -1; throws if cached more than once
  int cacher_of(int file) const;

 private:
  std::size_t idx_cf(int node_ord, int file) const;
  std::size_t idx_uw(int user, int chan) const;
  std::size_t idx_uf(int user, int file) const;

  int nodes_, users_, files_, channels_;
  std::vector<std::uint8_t> caching_;
  std::vector<std::uint8_t> channels_m_;
  std::vector<std::uint8_t> delivery_;
};

struct ConstraintViolation {
  std::string constraint;  // "capacity", "redundancy", "one-channel", "reuse", "delay-link"
  std::string detail;
  double slack = 0.0;  // negative by how much the constraint is missed
};

// Structural feasibility of (C, R): per-node capacity, single network-wide
// copy per file, exactly one channel per user, per-channel reuse limit.
std::vector<ConstraintViolation> check_assignment(
    const NetworkInstance& instance, const Assignment& assignment);

// Transmitter / interferer event probabilities for one (user, file) request.
// Probabilities are indexed by node ordinal; entries for excluded nodes stay 0.
struct ProbabilityBreakdown {
  double p_no_transmitter = 0.0;
  std::vector<double> p_transmitter;
  double p_no_interferer = 0.0;
  std::vector<double> p_interferer;
};

// General product form: P[T_{u,f} = {x}] = c_{x,f} prod_{x' != u,x} (1 - c_{x',f}).
// Works for arbitrary binary C; with single-copy caching it degenerates to the
// indicator of the unique cacher.
ProbabilityBreakdown transmitter_probs(const NetworkInstance& instance,
                                       const Assignment& assignment, int user,
                                       int file);

// Interferer event probabilities, conditioned on the active transmitter of
// u's own request (the MBS for the backhaul branch). The conditioning removes
// the active transmitter from the candidate co-channel receivers.
ProbabilityBreakdown interferer_probs(const NetworkInstance& instance,
                                      const PopularityModel& popularity,
                                      const Assignment& assignment, int user,
                                      int file,
                                      std::optional<NodeId> active_transmitter);

// Incremental evaluator of the end-to-end delivery-delay bound. Keeps the
// file->cacher index and per-user co-channel lists in sync with placement
// edits so the greedy and exhaustive searches can re-evaluate cheaply.
class DeliveryEvaluator {
 public:
  DeliveryEvaluator(const NetworkInstance& instance,
                    const PopularityModel& popularity,
                    const DelayBoundTable& bounds);

  void set_channels(const Assignment& assignment);
  void clear_caching();
  void place(int file, int node_ord);
  void unplace(int file, int node_ord);
  int cacher_of(int file) const { return cacher_of_[file - 1]; }

  // End-to-end bound for delivering file to user against the current state.
  double bound(int user, int file) const;
  bool deliverable(int user, int file) const;

  // SDR and the implied delivery matrix for the current (C, R)
  double sdr() const;
  void fill_deliveries(Assignment& assignment) const;
  // popularity-weighted mean of the per-pair delay bounds, a diagnostic
  double weighted_mean_bound() const;

  const NetworkInstance& instance() const { return *instance_; }
  const PopularityModel& popularity() const { return *popularity_; }

 private:
  friend double delivery_bound_linearized(const NetworkInstance&,
                                          const PopularityModel&,
                                          const DelayBoundTable&,
                                          const Assignment&, int, int);

  double interference_mass(int user, int file, int branch_tx_ord,
                           int y_ord) const;

  const NetworkInstance* instance_;
  const PopularityModel* popularity_;
  const DelayBoundTable* bounds_;
  std::vector<int> channel_of_;            // per user, 0 if unset
  std::vector<std::vector<int>> cochannel_;  // per user, ascending user ids
  std::vector<int> cacher_of_;             // per file, node ordinal or -1
  std::vector<std::vector<int>> files_at_;   // per node ordinal, ascending files
};

// Direct evaluation of the end-to-end bound from an assignment snapshot.
double delivery_bound(const NetworkInstance& instance,
                      const PopularityModel& popularity,
                      const DelayBoundTable& bounds,
                      const Assignment& assignment, int user, int file);

// Same value assembled through the linearization's auxiliary-variable chains
// (prefix products phi / phi^x / rho and the Omega / Lambda products). On any
// binary assignment satisfying the structural constraints this equals
// delivery_bound exactly: both sides accumulate the identical nonzero terms
// in the identical order, and every auxiliary factor is an exact 0/1.
double delivery_bound_linearized(const NetworkInstance& instance,
                                 const PopularityModel& popularity,
                                 const DelayBoundTable& bounds,
                                 const Assignment& assignment, int user,
                                 int file);

// Auxiliary-variable chains, shared by the linearized evaluator and the ILP
// substitution checks. Ordinals index the canonical node ordering.
double aux_phi(const Assignment& assignment, int upto_ord, int file);
double aux_phi_x(const Assignment& assignment, int x_ord, int upto_ord,
                 int file);
double aux_rho(const Assignment& assignment, int user, int upto_user,
               int chan);

}  // namespace hetcache
