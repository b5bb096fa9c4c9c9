#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetcache {

enum class NodeKind : std::uint8_t { MBS = 0, SBS = 1, UE = 2 };

std::string to_string(NodeKind kind);

// Cache-capable node handle. Indices are 1-based within their kind, matching
// the usual s_1..s_S / u_1..u_U numbering; the MBS has index 1.
struct NodeId {
  NodeKind kind = NodeKind::MBS;
  int index = 1;

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

inline NodeId mbs_node() { return {NodeKind::MBS, 1}; }
inline NodeId sbs_node(int i) { return {NodeKind::SBS, i}; }
inline NodeId ue_node(int i) { return {NodeKind::UE, i}; }

std::string to_string(const NodeId& id);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Everything needed to instantiate the delivery model on one macro cell:
// geometry, radio parameters, caching capacities and channel budget.
struct InstanceParams {
  double cell_radius_m = 100.0;
  double sbs_radius_m = 71.0;  // SBS deployment radius around the MBS
  double min_separation_m = 1.0;

  double power_mbs_w = 1.0;
  double power_sbs_w = 0.5;
  double power_ue_w = 0.1;
  double noise_power_w = 0.01;
  double path_loss_exponent = 3.0;
  double reference_distance_m = 1.0;

  int num_channels = 3;
  double bandwidth_hz = 1e6;
  double slot_duration_s = 0.01;
  double backhaul_delay_slots = 10.0;
  double delay_threshold_slots = 5.0;

  double cache_mbs_bits = 500.0;
  double cache_sbs_bits = 200.0;
  double cache_ue_bits = 100.0;
  int file_count = 100;
  double file_length_bits = 100.0;

  // Per-channel reuse limit; 0 means "derive ceil(U/W)".
  int reuse_limit = 0;
};

class NetworkInstance {
 public:
  NetworkInstance(InstanceParams params, std::uint64_t seed, int num_ues,
                  int num_sbs, std::vector<Point2> positions);

  const InstanceParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  int num_ues() const { return num_ues_; }
  int num_sbs() const { return num_sbs_; }
  // |C| = U + S + 1 cache-capable nodes
  int num_nodes() const { return num_ues_ + num_sbs_ + 1; }

  // Canonical node ordering used for matrices and file formats:
  // MBS, SBS 1..S, UE 1..U.
  NodeId node_at(int ordinal) const;
  int ordinal_of(const NodeId& id) const;
  std::vector<NodeId> all_nodes() const;

  const Point2& position(const NodeId& id) const;
  double transmit_power_w(const NodeId& id) const;
  double cache_capacity_bits(const NodeId& id) const;
  // capacity in whole file slots, floor(C_i / L)
  int cache_slots(const NodeId& id) const;

  double distance(const NodeId& i, const NodeId& j) const;
  // theta = P_i / sigma0^2 * (d_ij / d0)^(-alpha); requires i != j
  double theta(const NodeId& i, const NodeId& j) const;

  // normalized load L / (tau * B), the Chernoff exponent argument
  double load() const;
  int reuse_limit() const;

 private:
  void validate() const;

  InstanceParams params_;
  std::uint64_t seed_ = 0;
  int num_ues_ = 0;
  int num_sbs_ = 0;
  std::vector<Point2> positions_;  // indexed by ordinal
};

// Places the MBS at the origin, SBSs uniformly in the SBS disk and UEs
// uniformly in the cell disk, resampling any draw closer than
// min_separation_m to an already placed node. Deterministic in seed.
NetworkInstance generate_instance(const InstanceParams& params,
                                  std::uint64_t seed, int num_ues,
                                  int num_sbs);

}  // namespace hetcache
