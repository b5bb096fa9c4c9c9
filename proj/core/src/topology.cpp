#include "hetcache/topology.hpp"

#include <cmath>
#include <numbers>

#include "hetcache/rng.hpp"

namespace hetcache {

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::MBS: return "mbs";
    case NodeKind::SBS: return "sbs";
    case NodeKind::UE: return "ue";
  }
  return "?";
}

std::string to_string(const NodeId& id) {
  return to_string(id.kind) + "_" + std::to_string(id.index);
}

NetworkInstance::NetworkInstance(InstanceParams params, std::uint64_t seed,
                                 int num_ues, int num_sbs,
                                 std::vector<Point2> positions)
    : params_(params),
      seed_(seed),
      num_ues_(num_ues),
      num_sbs_(num_sbs),
      positions_(std::move(positions)) {
  validate();
}

void NetworkInstance::validate() const {
  const auto& p = params_;
  auto reject = [](const std::string& what) {
    throw std::invalid_argument("NetworkInstance: " + what);
  };
  if (num_ues_ < 1) reject("at least one UE required");
  if (num_sbs_ < 0) reject("negative SBS count");
  if (positions_.size() != static_cast<std::size_t>(num_nodes()))
    reject("position table size mismatch");
  if (p.cell_radius_m <= 0.0) reject("cell_radius must be positive");
  if (p.sbs_radius_m < 0.0 || p.sbs_radius_m > p.cell_radius_m)
    reject("sbs_radius must lie in [0, cell_radius]");
  if (p.path_loss_exponent < 2.0) reject("path_loss_exponent must be >= 2");
  if (p.reference_distance_m <= 0.0) reject("reference_distance must be positive");
  if (p.slot_duration_s <= 0.0) reject("slot_duration must be positive");
  if (p.bandwidth_hz <= 0.0) reject("bandwidth must be positive");
  if (p.noise_power_w <= 0.0) reject("noise_power must be positive");
  if (p.power_mbs_w <= 0.0 || p.power_sbs_w <= 0.0 || p.power_ue_w <= 0.0)
    reject("transmit powers must be positive");
  if (p.num_channels < 1) reject("at least one channel required");
  if (p.file_count < 1) reject("at least one file required");
  if (p.file_length_bits <= 0.0) reject("file_length must be positive");
  if (p.backhaul_delay_slots < 0.0) reject("backhaul_delay must be >= 0");
  if (p.delay_threshold_slots < 0.0) reject("delay_threshold must be >= 0");
  // Weak capacity ordering. Strict F*L > C_m > C_S > C_U > 0 holds for the
  // library defaults, but parameter sweeps legitimately drive C_U to 0 or up
  // to C_S, so only the library-vs-cache ordering is enforced hard.
  if (p.cache_mbs_bits < 0.0 || p.cache_sbs_bits < 0.0 || p.cache_ue_bits < 0.0)
    reject("cache capacities must be >= 0");
  if (static_cast<double>(p.file_count) * p.file_length_bits < p.cache_mbs_bits)
    reject("library size F*L must not be below the MBS cache capacity");
  if (p.cache_mbs_bits < p.cache_sbs_bits || p.cache_sbs_bits < p.cache_ue_bits)
    reject("cache capacities must satisfy C_m >= C_S >= C_U");
  if (p.reuse_limit < 0) reject("reuse_limit must be >= 0");
  if (p.reuse_limit > 0) {
    int min_reuse = (num_ues_ + p.num_channels - 1) / p.num_channels;
    if (p.reuse_limit < min_reuse)
      reject("reuse_limit below ceil(U/W), channel allocation infeasible");
  }
  for (int ord = 0; ord < num_nodes(); ++ord) {
    const Point2& pos = positions_[ord];
    double r = std::hypot(pos.x, pos.y);
    double limit =
        node_at(ord).kind == NodeKind::SBS ? p.sbs_radius_m : p.cell_radius_m;
    if (r > limit * (1.0 + 1e-12))
      reject("node " + to_string(node_at(ord)) + " outside its radius");
  }
}

NodeId NetworkInstance::node_at(int ordinal) const {
  if (ordinal < 0 || ordinal >= num_nodes())
    throw std::out_of_range("node ordinal out of range");
  if (ordinal == 0) return mbs_node();
  if (ordinal <= num_sbs_) return sbs_node(ordinal);
  return ue_node(ordinal - num_sbs_);
}

int NetworkInstance::ordinal_of(const NodeId& id) const {
  switch (id.kind) {
    case NodeKind::MBS:
      if (id.index != 1) throw std::out_of_range("MBS index must be 1");
      return 0;
    case NodeKind::SBS:
      if (id.index < 1 || id.index > num_sbs_)
        throw std::out_of_range("unknown SBS index " + std::to_string(id.index));
      return id.index;
    case NodeKind::UE:
      if (id.index < 1 || id.index > num_ues_)
        throw std::out_of_range("unknown UE index " + std::to_string(id.index));
      return num_sbs_ + id.index;
  }
  throw std::out_of_range("unknown node kind");
}

std::vector<NodeId> NetworkInstance::all_nodes() const {
  std::vector<NodeId> out;
  out.reserve(num_nodes());
  for (int ord = 0; ord < num_nodes(); ++ord) out.push_back(node_at(ord));
  return out;
}

const Point2& NetworkInstance::position(const NodeId& id) const {
  return positions_[ordinal_of(id)];
}

double NetworkInstance::transmit_power_w(const NodeId& id) const {
  switch (id.kind) {
    case NodeKind::MBS: return params_.power_mbs_w;
    case NodeKind::SBS: return params_.power_sbs_w;
    case NodeKind::UE: return params_.power_ue_w;
  }
  return 0.0;
}

double NetworkInstance::cache_capacity_bits(const NodeId& id) const {
  switch (id.kind) {
    case NodeKind::MBS: return params_.cache_mbs_bits;
    case NodeKind::SBS: return params_.cache_sbs_bits;
    case NodeKind::UE: return params_.cache_ue_bits;
  }
  return 0.0;
}

int NetworkInstance::cache_slots(const NodeId& id) const {
  return static_cast<int>(std::floor(cache_capacity_bits(id) /
                                     params_.file_length_bits));
}

double NetworkInstance::distance(const NodeId& i, const NodeId& j) const {
  const Point2& a = positions_[ordinal_of(i)];
  const Point2& b = positions_[ordinal_of(j)];
  return std::hypot(a.x - b.x, a.y - b.y);
}

double NetworkInstance::theta(const NodeId& i, const NodeId& j) const {
  if (i == j) throw std::invalid_argument("theta undefined for i == j");
  double d = distance(i, j);
  if (d <= 0.0) throw std::invalid_argument("theta undefined at zero distance");
  double snr = transmit_power_w(i) / params_.noise_power_w;
  return snr * std::pow(d / params_.reference_distance_m,
                        -params_.path_loss_exponent);
}

double NetworkInstance::load() const {
  return params_.file_length_bits /
         (params_.slot_duration_s * params_.bandwidth_hz);
}

int NetworkInstance::reuse_limit() const {
  if (params_.reuse_limit > 0) return params_.reuse_limit;
  return (num_ues_ + params_.num_channels - 1) / params_.num_channels;
}

namespace {

Point2 draw_in_disk(Rng& rng, double radius) {
  double r = radius * std::sqrt(rng.uniform());
  double phi = 2.0 * std::numbers::pi * rng.uniform();
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace

NetworkInstance generate_instance(const InstanceParams& params,
                                  std::uint64_t seed, int num_ues,
                                  int num_sbs) {
  if (num_ues < 1) throw std::invalid_argument("generate_instance: U >= 1 required");
  if (num_sbs < 0) throw std::invalid_argument("generate_instance: S >= 0 required");
  if (params.cell_radius_m <= 0.0)
    throw std::invalid_argument("generate_instance: cell_radius must be positive");

  Rng rng(derive_seed(seed, 0x70706f));
  std::vector<Point2> positions;
  positions.push_back({0.0, 0.0});  // MBS at the origin

  auto far_enough = [&](const Point2& cand) {
    for (const Point2& p : positions) {
      if (std::hypot(cand.x - p.x, cand.y - p.y) < params.min_separation_m)
        return false;
    }
    return true;
  };
  auto place = [&](double radius) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      Point2 cand = draw_in_disk(rng, radius);
      if (far_enough(cand)) {
        positions.push_back(cand);
        return;
      }
    }
    throw std::runtime_error(
        "generate_instance: cannot satisfy min_separation, region too crowded");
  };

  for (int s = 0; s < num_sbs; ++s) place(params.sbs_radius_m);
  for (int u = 0; u < num_ues; ++u) place(params.cell_radius_m);

  return NetworkInstance(params, seed, num_ues, num_sbs, std::move(positions));
}

}  // namespace hetcache
