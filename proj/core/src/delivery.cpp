#include "hetcache/delivery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetcache {

Assignment::Assignment(int num_nodes, int num_users, int num_files,
                       int num_channels)
    : nodes_(num_nodes),
      users_(num_users),
      files_(num_files),
      channels_(num_channels),
      caching_(static_cast<std::size_t>(num_nodes) * num_files, 0),
      channels_m_(static_cast<std::size_t>(num_users) * num_channels, 0),
      delivery_(static_cast<std::size_t>(num_users) * num_files, 0) {
  if (num_nodes < 1 || num_users < 1 || num_files < 1 || num_channels < 1)
    throw std::invalid_argument("Assignment: all dimensions must be >= 1");
}

std::size_t Assignment::idx_cf(int node_ord, int file) const {
  if (node_ord < 0 || node_ord >= nodes_ || file < 1 || file > files_)
    throw std::out_of_range("Assignment: caching index");
  return static_cast<std::size_t>(node_ord) * files_ + (file - 1);
}
std::size_t Assignment::idx_uw(int user, int chan) const {
  if (user < 1 || user > users_ || chan < 1 || chan > channels_)
    throw std::out_of_range("Assignment: channel index");
  return static_cast<std::size_t>(user - 1) * channels_ + (chan - 1);
}
std::size_t Assignment::idx_uf(int user, int file) const {
  if (user < 1 || user > users_ || file < 1 || file > files_)
    throw std::out_of_range("Assignment: delivery index");
  return static_cast<std::size_t>(user - 1) * files_ + (file - 1);
}

int Assignment::channel_of(int user) const {
  for (int w = 1; w <= channels_; ++w)
    if (channel(user, w)) return w;
  return 0;
}

int Assignment::cacher_of(int file) const {
  int found = -1;
  for (int ord = 0; ord < nodes_; ++ord) {
    if (cached(ord, file)) {
      if (found >= 0)
        throw std::invalid_argument(
            "Assignment: file " + std::to_string(file) +
            " cached at more than one node");
      found = ord;
    }
  }
  return found;
}

std::vector<ConstraintViolation> check_assignment(
    const NetworkInstance& instance, const Assignment& assignment) {
  std::vector<ConstraintViolation> violations;
  if (assignment.num_nodes() != instance.num_nodes() ||
      assignment.num_users() != instance.num_ues() ||
      assignment.num_files() != instance.params().file_count ||
      assignment.num_channels() != instance.params().num_channels)
    throw std::invalid_argument(
        "check_assignment: assignment dimensions do not match the instance");

  for (int ord = 0; ord < instance.num_nodes(); ++ord) {
    int used = 0;
    for (int f = 1; f <= assignment.num_files(); ++f)
      used += assignment.cached(ord, f) ? 1 : 0;
    int slots = instance.cache_slots(instance.node_at(ord));
    if (used > slots)
      violations.push_back({"capacity",
                            "node " + to_string(instance.node_at(ord)) +
                                " stores " + std::to_string(used) + " of " +
                                std::to_string(slots) + " slots",
                            static_cast<double>(slots - used)});
  }
  for (int f = 1; f <= assignment.num_files(); ++f) {
    int copies = 0;
    for (int ord = 0; ord < instance.num_nodes(); ++ord)
      copies += assignment.cached(ord, f) ? 1 : 0;
    if (copies > 1)
      violations.push_back({"redundancy",
                            "file " + std::to_string(f) + " has " +
                                std::to_string(copies) + " copies",
                            static_cast<double>(1 - copies)});
  }
  for (int u = 1; u <= assignment.num_users(); ++u) {
    int chans = 0;
    for (int w = 1; w <= assignment.num_channels(); ++w)
      chans += assignment.channel(u, w) ? 1 : 0;
    if (chans != 1)
      violations.push_back({"one-channel",
                            "user " + std::to_string(u) + " holds " +
                                std::to_string(chans) + " channels",
                            static_cast<double>(1 - chans)});
  }
  int reuse = instance.reuse_limit();
  for (int w = 1; w <= assignment.num_channels(); ++w) {
    int users = 0;
    for (int u = 1; u <= assignment.num_users(); ++u)
      users += assignment.channel(u, w) ? 1 : 0;
    if (users > reuse)
      violations.push_back({"reuse",
                            "channel " + std::to_string(w) + " serves " +
                                std::to_string(users) + " users, limit " +
                                std::to_string(reuse),
                            static_cast<double>(reuse - users)});
  }
  return violations;
}

ProbabilityBreakdown transmitter_probs(const NetworkInstance& instance,
                                       const Assignment& assignment, int user,
                                       int file) {
  int u_ord = instance.ordinal_of(ue_node(user));
  ProbabilityBreakdown out;
  out.p_transmitter.assign(instance.num_nodes(), 0.0);

  double p_empty = 1.0;
  for (int x = 0; x < instance.num_nodes(); ++x) {
    if (x == u_ord) continue;
    p_empty *= 1.0 - (assignment.cached(x, file) ? 1.0 : 0.0);
  }
  out.p_no_transmitter = p_empty;

  for (int x = 0; x < instance.num_nodes(); ++x) {
    if (x == u_ord) continue;
    double p = assignment.cached(x, file) ? 1.0 : 0.0;
    for (int xp = 0; xp < instance.num_nodes(); ++xp) {
      if (xp == u_ord || xp == x) continue;
      p *= 1.0 - (assignment.cached(xp, file) ? 1.0 : 0.0);
    }
    out.p_transmitter[x] = p;
  }
  return out;
}

ProbabilityBreakdown interferer_probs(
    const NetworkInstance& instance, const PopularityModel& popularity,
    const Assignment& assignment, int user, int file,
    std::optional<NodeId> active_transmitter) {
  int u_ord = instance.ordinal_of(ue_node(user));
  int tx_ord =
      active_transmitter ? instance.ordinal_of(*active_transmitter) : -1;
  ProbabilityBreakdown out;
  out.p_interferer.assign(instance.num_nodes(), 0.0);

  // no-interferer event: u's channel carries no other allocation
  for (int w = 1; w <= assignment.num_channels(); ++w) {
    double term = assignment.channel(user, w) ? 1.0 : 0.0;
    for (int up = 1; up <= assignment.num_users(); ++up) {
      if (up == user) continue;
      term *= 1.0 - (assignment.channel(up, w) ? 1.0 : 0.0);
    }
    out.p_no_interferer += term;
  }

  for (int y = 0; y < instance.num_nodes(); ++y) {
    if (y == u_ord || y == tx_ord) continue;
    double mass = 0.0;
    for (int w = 1; w <= assignment.num_channels(); ++w) {
      for (int up = 1; up <= assignment.num_users(); ++up) {
        if (up == user) continue;
        int up_ord = instance.ordinal_of(ue_node(up));
        if (up_ord == tx_ord || up_ord == y) continue;
        double rr = (assignment.channel(user, w) ? 1.0 : 0.0) *
                    (assignment.channel(up, w) ? 1.0 : 0.0);
        if (rr == 0.0) continue;
        for (int k = 1; k <= popularity.class_count(); ++k) {
          for (int fp = 1; fp <= assignment.num_files(); ++fp) {
            if (fp == file) continue;
            double p_tx = assignment.cached(y, fp) ? 1.0 : 0.0;
            for (int xp = 0; xp < instance.num_nodes() && p_tx != 0.0; ++xp) {
              if (xp == up_ord || xp == y) continue;
              p_tx *= 1.0 - (assignment.cached(xp, fp) ? 1.0 : 0.0);
            }
            if (p_tx == 0.0) continue;
            mass += rr * popularity.class_prob(up, k) *
                    popularity.zipf_prob(fp, k) * p_tx;
          }
        }
      }
    }
    out.p_interferer[y] = mass;
  }
  return out;
}

DeliveryEvaluator::DeliveryEvaluator(const NetworkInstance& instance,
                                     const PopularityModel& popularity,
                                     const DelayBoundTable& bounds)
    : instance_(&instance), popularity_(&popularity), bounds_(&bounds) {
  if (popularity.file_count() != instance.params().file_count)
    throw std::invalid_argument(
        "DeliveryEvaluator: popularity/instance file counts differ");
  if (popularity.user_count() != instance.num_ues())
    throw std::invalid_argument(
        "DeliveryEvaluator: popularity/instance user counts differ");
  channel_of_.assign(instance.num_ues() + 1, 0);
  cochannel_.assign(instance.num_ues() + 1, {});
  cacher_of_.assign(instance.params().file_count, -1);
  files_at_.assign(instance.num_nodes(), {});
}

void DeliveryEvaluator::set_channels(const Assignment& assignment) {
  for (int u = 1; u <= instance_->num_ues(); ++u)
    channel_of_[u] = assignment.channel_of(u);
  for (int u = 1; u <= instance_->num_ues(); ++u) {
    cochannel_[u].clear();
    for (int up = 1; up <= instance_->num_ues(); ++up) {
      if (up != u && channel_of_[up] != 0 &&
          channel_of_[up] == channel_of_[u])
        cochannel_[u].push_back(up);
    }
  }
}

void DeliveryEvaluator::clear_caching() {
  std::fill(cacher_of_.begin(), cacher_of_.end(), -1);
  for (auto& files : files_at_) files.clear();
}

void DeliveryEvaluator::place(int file, int node_ord) {
  if (cacher_of_[file - 1] != -1)
    throw std::invalid_argument("DeliveryEvaluator: file already placed");
  cacher_of_[file - 1] = node_ord;
  auto& files = files_at_[node_ord];
  files.insert(std::upper_bound(files.begin(), files.end(), file), file);
}

void DeliveryEvaluator::unplace(int file, int node_ord) {
  if (cacher_of_[file - 1] != node_ord)
    throw std::invalid_argument("DeliveryEvaluator: file not placed there");
  cacher_of_[file - 1] = -1;
  auto& files = files_at_[node_ord];
  files.erase(std::find(files.begin(), files.end(), file));
}

// Interference mass toward user u on its channel from transmissions out of
// node y, conditioned on branch transmitter branch_tx_ord. Terms accumulate
// in (u', k', f') order; delivery_bound_linearized mirrors this order so the
// two routes agree bit-for-bit.
double DeliveryEvaluator::interference_mass(int user, int file,
                                            int branch_tx_ord,
                                            int y_ord) const {
  const auto& files = files_at_[y_ord];
  if (files.empty()) return 0.0;
  double mass = 0.0;
  for (int up : cochannel_[user]) {
    int up_ord = instance_->ordinal_of(ue_node(up));
    if (up_ord == branch_tx_ord || up_ord == y_ord) continue;
    for (int k = 1; k <= popularity_->class_count(); ++k) {
      for (int fp : files) {
        if (fp == file) continue;
        mass += popularity_->class_prob(up, k) * popularity_->zipf_prob(fp, k);
      }
    }
  }
  return mass;
}

double DeliveryEvaluator::bound(int user, int file) const {
  int u_ord = instance_->ordinal_of(ue_node(user));
  int cacher = cacher_of_[file - 1];
  if (cacher == u_ord) return 0.0;  // served from the local cache

  // Backhaul branch when no node holds the file; otherwise the unique cacher.
  int tx_ord = cacher < 0 ? 0 : cacher;
  NodeId tx = instance_->node_at(tx_ord);
  NodeId rx = ue_node(user);
  bool alone = cochannel_[user].empty();

  double acc = 0.0;
  if (cacher < 0) acc += instance_->params().backhaul_delay_slots;
  if (alone) acc += bounds_->link_bound(tx, rx);
  for (int y = 0; y < instance_->num_nodes(); ++y) {
    if (y == u_ord || y == tx_ord) continue;
    double mass = interference_mass(user, file, tx_ord, y);
    if (mass != 0.0)
      acc += mass * bounds_->link_bound(tx, rx, instance_->node_at(y));
  }
  return acc;
}

bool DeliveryEvaluator::deliverable(int user, int file) const {
  return bound(user, file) <= instance_->params().delay_threshold_slots;
}

double DeliveryEvaluator::sdr() const {
  double total = 0.0;
  for (int u = 1; u <= instance_->num_ues(); ++u)
    for (int f = 1; f <= popularity_->file_count(); ++f)
      if (deliverable(u, f)) total += popularity_->averaged_popularity(u, f);
  return total / static_cast<double>(instance_->num_ues());
}

void DeliveryEvaluator::fill_deliveries(Assignment& assignment) const {
  for (int u = 1; u <= instance_->num_ues(); ++u)
    for (int f = 1; f <= popularity_->file_count(); ++f)
      assignment.set_delivered(u, f, deliverable(u, f));
}

double DeliveryEvaluator::weighted_mean_bound() const {
  double total = 0.0;
  for (int u = 1; u <= instance_->num_ues(); ++u)
    for (int f = 1; f <= popularity_->file_count(); ++f)
      total += popularity_->averaged_popularity(u, f) * bound(u, f);
  return total / static_cast<double>(instance_->num_ues());
}

double delivery_bound(const NetworkInstance& instance,
                      const PopularityModel& popularity,
                      const DelayBoundTable& bounds,
                      const Assignment& assignment, int user, int file) {
  DeliveryEvaluator eval(instance, popularity, bounds);
  eval.set_channels(assignment);
  for (int f = 1; f <= assignment.num_files(); ++f) {
    int cacher = assignment.cacher_of(f);
    if (cacher >= 0) eval.place(f, cacher);
  }
  return eval.bound(user, file);
}

double aux_phi(const Assignment& assignment, int upto_ord, int file) {
  double phi = 1.0;
  for (int ord = 0; ord <= upto_ord; ++ord)
    phi *= 1.0 - (assignment.cached(ord, file) ? 1.0 : 0.0);
  return phi;
}

double aux_phi_x(const Assignment& assignment, int x_ord, int upto_ord,
                 int file) {
  double phi = 1.0;
  for (int ord = 0; ord <= upto_ord; ++ord) {
    double c = assignment.cached(ord, file) ? 1.0 : 0.0;
    phi *= ord == x_ord ? c : 1.0 - c;
  }
  return phi;
}

double aux_rho(const Assignment& assignment, int user, int upto_user,
               int chan) {
  double rho = 1.0;
  for (int up = 1; up <= upto_user; ++up) {
    double r = assignment.channel(up, chan) ? 1.0 : 0.0;
    rho *= up == user ? r : 1.0 - r;
  }
  return rho;
}

double delivery_bound_linearized(const NetworkInstance& instance,
                                 const PopularityModel& popularity,
                                 const DelayBoundTable& bounds,
                                 const Assignment& assignment, int user,
                                 int file) {
  const int num_nodes = instance.num_nodes();
  const int num_users = instance.num_ues();
  const int num_chans = assignment.num_channels();
  const int u_ord = instance.ordinal_of(ue_node(user));
  NodeId rx = ue_node(user);

  double phi_full = aux_phi(assignment, num_nodes - 1, file);
  std::vector<double> rho(num_chans + 1, 0.0);
  for (int w = 1; w <= num_chans; ++w)
    rho[w] = aux_rho(assignment, user, num_users, w);

  // Accumulation mirrors delivery_bound: backhaul constant, then the
  // interference-free term, then interfered terms with ascending y, for the
  // backhaul branch first and the cache branches in ascending x. Every
  // auxiliary product below is an exact 0 or 1.
  double result = 0.0;

  // T0 * phi_{|C|,f}
  result += instance.params().backhaul_delay_slots * phi_full;

  // sum_w Omega^u * G_mu(empty), Omega^u = rho^u_{U,w} phi_{|C|,f}
  {
    double omega_sum = 0.0;
    for (int w = 1; w <= num_chans; ++w) omega_sum += rho[w] * phi_full;
    if (omega_sum != 0.0)
      result += omega_sum * bounds.link_bound(mbs_node(), rx);
  }

  // backhaul interfered terms: Lambda^y = gamma * phi^y, gamma = r_pair * phi
  for (int y = 0; y < num_nodes; ++y) {
    if (y == u_ord || y == 0) continue;  // y ranges over C \ {u, m}
    double mass = 0.0;
    for (int up = 1; up <= num_users; ++up) {
      if (up == user) continue;
      int up_ord = instance.ordinal_of(ue_node(up));
      if (up_ord == y) continue;
      for (int w = 1; w <= num_chans; ++w) {
        double r_pair = (assignment.channel(user, w) ? 1.0 : 0.0) *
                        (assignment.channel(up, w) ? 1.0 : 0.0);
        double gamma = r_pair * phi_full;
        if (gamma == 0.0) continue;
        for (int k = 1; k <= popularity.class_count(); ++k) {
          for (int fp = 1; fp <= assignment.num_files(); ++fp) {
            if (fp == file) continue;
            double lambda = gamma * aux_phi_x(assignment, y, num_nodes - 1, fp);
            if (lambda == 0.0) continue;
            mass += popularity.class_prob(up, k) * popularity.zipf_prob(fp, k) *
                    lambda;
          }
        }
      }
    }
    if (mass != 0.0)
      result += mass * bounds.link_bound(mbs_node(), rx, instance.node_at(y));
  }

  // cache branches
  for (int x = 0; x < num_nodes; ++x) {
    if (x == u_ord) continue;
    double phi_x_full = aux_phi_x(assignment, x, num_nodes - 1, file);
    NodeId tx = instance.node_at(x);

    double omega_sum = 0.0;
    for (int w = 1; w <= num_chans; ++w) omega_sum += rho[w] * phi_x_full;
    if (omega_sum != 0.0) result += omega_sum * bounds.link_bound(tx, rx);

    for (int y = 0; y < num_nodes; ++y) {
      if (y == u_ord || y == x) continue;
      double mass = 0.0;
      for (int up = 1; up <= num_users; ++up) {
        if (up == user) continue;
        int up_ord = instance.ordinal_of(ue_node(up));
        if (up_ord == y || up_ord == x) continue;
        for (int w = 1; w <= num_chans; ++w) {
          double r_pair = (assignment.channel(user, w) ? 1.0 : 0.0) *
                          (assignment.channel(up, w) ? 1.0 : 0.0);
          double gamma_x = r_pair * phi_x_full;
          if (gamma_x == 0.0) continue;
          for (int k = 1; k <= popularity.class_count(); ++k) {
            for (int fp = 1; fp <= assignment.num_files(); ++fp) {
              if (fp == file) continue;
              double lambda =
                  gamma_x * aux_phi_x(assignment, y, num_nodes - 1, fp);
              if (lambda == 0.0) continue;
              mass += popularity.class_prob(up, k) *
                      popularity.zipf_prob(fp, k) * lambda;
            }
          }
        }
      }
      if (mass != 0.0)
        result += mass * bounds.link_bound(tx, rx, instance.node_at(y));
    }
  }
  return result;
}

}  // namespace hetcache
