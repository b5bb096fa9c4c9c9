#include "hetcache/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hetcache {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// "key = value" lines; later duplicates win, which keeps files hand-editable.
std::map<std::string, std::string> read_kv(const std::string& path,
                                           const std::string& magic) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  bool magic_seen = false;
  while (std::getline(in, line)) {
    if (!magic_seen) {
      if (line.rfind("# " + magic, 0) != 0)
        throw std::runtime_error(path + ": expected header '# " + magic + "'");
      magic_seen = true;
      continue;
    }
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      std::size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv,
                           const std::string& key, const std::string& path) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw std::runtime_error(path + ": missing key '" + key + "'");
  return it->second;
}

double to_double(const std::string& s) { return std::stod(s); }
int to_int(const std::string& s) { return std::stoi(s); }

std::vector<double> to_doubles(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

std::vector<int> to_ints(const std::string& s) {
  std::istringstream in(s);
  std::vector<int> out;
  int v;
  while (in >> v) out.push_back(v);
  return out;
}

}  // namespace

void save_scenario(const std::string& path, const Scenario& scenario) {
  const NetworkInstance& inst = scenario.instance;
  const PopularityModel& pop = scenario.popularity;
  const InstanceParams& p = inst.params();

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# hetcache scenario v1\n";
  out << "seed = " << inst.seed() << "\n";
  out << "num_ues = " << inst.num_ues() << "\n";
  out << "num_sbs = " << inst.num_sbs() << "\n";
  out << "cell_radius_m = " << fmt(p.cell_radius_m) << "\n";
  out << "sbs_radius_m = " << fmt(p.sbs_radius_m) << "\n";
  out << "min_separation_m = " << fmt(p.min_separation_m) << "\n";
  out << "power_mbs_w = " << fmt(p.power_mbs_w) << "\n";
  out << "power_sbs_w = " << fmt(p.power_sbs_w) << "\n";
  out << "power_ue_w = " << fmt(p.power_ue_w) << "\n";
  out << "noise_power_w = " << fmt(p.noise_power_w) << "\n";
  out << "path_loss_exponent = " << fmt(p.path_loss_exponent) << "\n";
  out << "reference_distance_m = " << fmt(p.reference_distance_m) << "\n";
  out << "num_channels = " << p.num_channels << "\n";
  out << "bandwidth_hz = " << fmt(p.bandwidth_hz) << "\n";
  out << "slot_duration_s = " << fmt(p.slot_duration_s) << "\n";
  out << "backhaul_delay_slots = " << fmt(p.backhaul_delay_slots) << "\n";
  out << "delay_threshold_slots = " << fmt(p.delay_threshold_slots) << "\n";
  out << "cache_mbs_bits = " << fmt(p.cache_mbs_bits) << "\n";
  out << "cache_sbs_bits = " << fmt(p.cache_sbs_bits) << "\n";
  out << "cache_ue_bits = " << fmt(p.cache_ue_bits) << "\n";
  out << "file_count = " << p.file_count << "\n";
  out << "file_length_bits = " << fmt(p.file_length_bits) << "\n";
  out << "reuse_limit = " << p.reuse_limit << "\n";
  for (int ord = 0; ord < inst.num_nodes(); ++ord) {
    NodeId id = inst.node_at(ord);
    const Point2& pos = inst.position(id);
    out << "pos_" << to_string(id) << " = " << fmt(pos.x) << " " << fmt(pos.y)
        << "\n";
  }
  out << "zipf_beta = " << fmt(pop.zipf_beta()) << "\n";
  out << "class_count = " << pop.class_count() << "\n";
  for (int k = 1; k <= pop.class_count(); ++k) {
    out << "rank_k" << k << " =";
    for (int f = 1; f <= pop.file_count(); ++f) out << " " << pop.rank(f, k);
    out << "\n";
  }
  for (int u = 1; u <= pop.user_count(); ++u) {
    out << "class_probs_u" << u << " =";
    for (int k = 1; k <= pop.class_count(); ++k)
      out << " " << fmt(pop.class_prob(u, k));
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

Scenario load_scenario(const std::string& path) {
  auto kv = read_kv(path, "hetcache scenario v1");
  InstanceParams p;
  p.cell_radius_m = to_double(require(kv, "cell_radius_m", path));
  p.sbs_radius_m = to_double(require(kv, "sbs_radius_m", path));
  p.min_separation_m = to_double(require(kv, "min_separation_m", path));
  p.power_mbs_w = to_double(require(kv, "power_mbs_w", path));
  p.power_sbs_w = to_double(require(kv, "power_sbs_w", path));
  p.power_ue_w = to_double(require(kv, "power_ue_w", path));
  p.noise_power_w = to_double(require(kv, "noise_power_w", path));
  p.path_loss_exponent = to_double(require(kv, "path_loss_exponent", path));
  p.reference_distance_m =
      to_double(require(kv, "reference_distance_m", path));
  p.num_channels = to_int(require(kv, "num_channels", path));
  p.bandwidth_hz = to_double(require(kv, "bandwidth_hz", path));
  p.slot_duration_s = to_double(require(kv, "slot_duration_s", path));
  p.backhaul_delay_slots =
      to_double(require(kv, "backhaul_delay_slots", path));
  p.delay_threshold_slots =
      to_double(require(kv, "delay_threshold_slots", path));
  p.cache_mbs_bits = to_double(require(kv, "cache_mbs_bits", path));
  p.cache_sbs_bits = to_double(require(kv, "cache_sbs_bits", path));
  p.cache_ue_bits = to_double(require(kv, "cache_ue_bits", path));
  p.file_count = to_int(require(kv, "file_count", path));
  p.file_length_bits = to_double(require(kv, "file_length_bits", path));
  p.reuse_limit = to_int(require(kv, "reuse_limit", path));

  int num_ues = to_int(require(kv, "num_ues", path));
  int num_sbs = to_int(require(kv, "num_sbs", path));
  std::uint64_t seed = std::stoull(require(kv, "seed", path));

  std::vector<Point2> positions;
  auto read_pos = [&](const NodeId& id) {
    auto vals = to_doubles(require(kv, "pos_" + to_string(id), path));
    if (vals.size() != 2)
      throw std::runtime_error(path + ": bad position for " + to_string(id));
    positions.push_back({vals[0], vals[1]});
  };
  read_pos(mbs_node());
  for (int s = 1; s <= num_sbs; ++s) read_pos(sbs_node(s));
  for (int u = 1; u <= num_ues; ++u) read_pos(ue_node(u));
  NetworkInstance instance(p, seed, num_ues, num_sbs, std::move(positions));

  double beta = to_double(require(kv, "zipf_beta", path));
  int classes = to_int(require(kv, "class_count", path));
  std::vector<std::vector<int>> ranks;
  for (int k = 1; k <= classes; ++k)
    ranks.push_back(to_ints(require(kv, "rank_k" + std::to_string(k), path)));
  std::vector<std::vector<double>> probs;
  for (int u = 1; u <= num_ues; ++u)
    probs.push_back(
        to_doubles(require(kv, "class_probs_u" + std::to_string(u), path)));
  PopularityModel popularity(p.file_count, beta, std::move(ranks),
                             std::move(probs));
  return Scenario{std::move(instance), std::move(popularity)};
}

void save_assignment(const std::string& path, const Assignment& assignment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# hetcache assignment v1\n";
  out << "nodes = " << assignment.num_nodes() << "\n";
  out << "users = " << assignment.num_users() << "\n";
  out << "files = " << assignment.num_files() << "\n";
  out << "channels = " << assignment.num_channels() << "\n";
  for (int ord = 0; ord < assignment.num_nodes(); ++ord) {
    out << "C_n" << ord << " = ";
    for (int f = 1; f <= assignment.num_files(); ++f)
      out << (assignment.cached(ord, f) ? '1' : '0');
    out << "\n";
  }
  for (int u = 1; u <= assignment.num_users(); ++u) {
    out << "R_u" << u << " = ";
    for (int w = 1; w <= assignment.num_channels(); ++w)
      out << (assignment.channel(u, w) ? '1' : '0');
    out << "\n";
  }
  for (int u = 1; u <= assignment.num_users(); ++u) {
    out << "X_u" << u << " = ";
    for (int f = 1; f <= assignment.num_files(); ++f)
      out << (assignment.delivered(u, f) ? '1' : '0');
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

Assignment load_assignment(const std::string& path) {
  auto kv = read_kv(path, "hetcache assignment v1");
  int nodes = to_int(require(kv, "nodes", path));
  int users = to_int(require(kv, "users", path));
  int files = to_int(require(kv, "files", path));
  int channels = to_int(require(kv, "channels", path));
  Assignment assignment(nodes, users, files, channels);

  auto parse_row = [&](const std::string& key, int expected) {
    const std::string& bits = require(kv, key, path);
    if (static_cast<int>(bits.size()) != expected)
      throw std::runtime_error(path + ": row " + key + " must have " +
                               std::to_string(expected) + " binary digits");
    for (char c : bits)
      if (c != '0' && c != '1')
        throw std::runtime_error(path + ": row " + key + " is not binary");
    return bits;
  };
  for (int ord = 0; ord < nodes; ++ord) {
    std::string bits = parse_row("C_n" + std::to_string(ord), files);
    for (int f = 1; f <= files; ++f)
      assignment.set_cached(ord, f, bits[f - 1] == '1');
  }
  for (int u = 1; u <= users; ++u) {
    std::string bits = parse_row("R_u" + std::to_string(u), channels);
    for (int w = 1; w <= channels; ++w)
      assignment.set_channel(u, w, bits[w - 1] == '1');
  }
  for (int u = 1; u <= users; ++u) {
    std::string bits = parse_row("X_u" + std::to_string(u), files);
    for (int f = 1; f <= files; ++f)
      assignment.set_delivered(u, f, bits[f - 1] == '1');
  }
  return assignment;
}

}  // namespace hetcache
