#include "hetcache/delay_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hetcache {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double quantize12(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  double mag = std::floor(std::log10(std::abs(x)));
  if (mag > 280.0 || mag < -280.0) return x;  // scaling would overflow
  double scale = std::pow(10.0, 11.0 - mag);
  return std::round(x * scale) / scale;
}

void check_params(const LinkBoundParams& params) {
  if (!(params.theta > 0.0))
    throw std::invalid_argument("link bound: theta must be positive");
  if (!(params.load > 0.0))
    throw std::invalid_argument("link bound: load must be positive");
  for (double th : params.interferer_thetas)
    if (!(th > 0.0))
      throw std::invalid_argument("link bound: interferer theta must be positive");
}

// t-independent additive log term contributed by the interferer set:
// T * ln(1 + sum theta') on top of the zeta0 exponent. The interfered pdf is
// dominated pointwise by (1 + sum theta') times the interference-free pdf
// (each 1/(theta + theta'' (g-1)) <= 1/theta and theta^|I| <= prod of the
// denominators), so the per-slot moment scales by at most that constant.
double interference_log_factor(const LinkBoundParams& params) {
  double sum = 0.0;
  for (double th : params.interferer_thetas) sum += th;
  return std::log1p(sum);
}

double clip_probability(double log_value) {
  if (log_value >= 0.0) return 1.0;  // overflow of the raw bound means "no info"
  return std::exp(log_value);
}

// Shared per-theta grid of the slot moment, so that series evaluation over
// many T (and many interferer sets) reuses the expensive quadratures. The
// grid points are exact evaluations; a minimum taken over them is therefore
// still a valid Chernoff bound, just marginally less tight than the true
// infimum over t.
struct MomentGrid {
  std::vector<double> t;
  std::vector<double> log_m;
};

constexpr int kMomentGridPoints = 192;
// cached entries keep only the leading tail-bound terms; long series would
// otherwise pin hundreds of megabytes across a sweep
constexpr std::size_t kStoredZetaTerms = 128;

const MomentGrid& moment_grid_for(double theta) {
  static std::mutex mutex;
  static std::unordered_map<double, std::unique_ptr<MomentGrid>> cache;
  double key = quantize12(theta);
  std::scoped_lock lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto grid = std::make_unique<MomentGrid>();
  grid->t.resize(kMomentGridPoints);
  grid->log_m.resize(kMomentGridPoints);
  for (int i = 0; i < kMomentGridPoints; ++i) {
    double t = kChernoffTMin +
               (kChernoffTMax - kChernoffTMin) * i / (kMomentGridPoints - 1);
    grid->t[i] = t;
    grid->log_m[i] = log_slot_moment(t, theta);
  }
  const MomentGrid& ref = *grid;
  cache.emplace(key, std::move(grid));
  return ref;
}

// min_i (t_i*load + T*log_m_i) evaluated for T = 1, 2, ... is the lower
// envelope of straight lines in T. One envelope per (theta, load) serves
// every interferer variant of the link, because the interference factor is
// just an additive per-slot constant in the log domain.
class RawTailCurve {
 public:
  RawTailCurve(const MomentGrid& grid, double load) {
    // sort lines by decreasing slope; on ties keep the lowest intercept
    std::vector<std::pair<double, double>> lines(kMomentGridPoints);
    for (int i = 0; i < kMomentGridPoints; ++i)
      lines[i] = {grid.log_m[i], grid.t[i] * load};
    std::sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (const auto& [slope, intercept] : lines) {
      if (!slopes_.empty() && slope == slopes_.back()) continue;
      while (!slopes_.empty() && intercept <= intercepts_.back()) pop();
      while (slopes_.size() >= 2 && useless_middle(slope, intercept)) pop();
      slopes_.push_back(slope);
      intercepts_.push_back(intercept);
    }
  }

  // raw log tail bound at T slots; grows the memo on demand
  double value(int slots) {
    while (static_cast<int>(values_.size()) < slots) {
      double t = static_cast<double>(values_.size() + 1);
      while (cursor_ + 1 < slopes_.size() &&
             intercepts_[cursor_ + 1] + slopes_[cursor_ + 1] * t <=
                 intercepts_[cursor_] + slopes_[cursor_] * t)
        ++cursor_;
      values_.push_back(intercepts_[cursor_] + slopes_[cursor_] * t);
    }
    return values_[slots - 1];
  }

 private:
  void pop() {
    slopes_.pop_back();
    intercepts_.pop_back();
  }
  // with candidate (slope, intercept) incoming, is the last hull line
  // dominated everywhere by its neighbours?
  bool useless_middle(double slope, double intercept) const {
    double s1 = slopes_[slopes_.size() - 2];
    double a1 = intercepts_[intercepts_.size() - 2];
    double s2 = slopes_.back(), a2 = intercepts_.back();
    // intersection of (s1,a1) with candidate versus with (s2,a2)
    return (intercept - a1) * (s1 - s2) <= (a2 - a1) * (s1 - slope);
  }

  std::vector<double> slopes_;      // decreasing
  std::vector<double> intercepts_;
  std::vector<double> values_;
  std::size_t cursor_ = 0;
};

RawTailCurve& raw_curve_for(double theta, double load) {
  static std::mutex mutex;
  static std::map<std::pair<double, double>, std::unique_ptr<RawTailCurve>>
      cache;
  std::pair<double, double> key{quantize12(theta), quantize12(load)};
  std::scoped_lock lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto curve = std::make_unique<RawTailCurve>(moment_grid_for(theta), load);
  RawTailCurve& ref = *curve;
  cache.emplace(key, std::move(curve));
  return ref;
}

struct EntryKey {
  double theta;
  double load;
  std::vector<double> interferers;
  double rel_tol;
  int t_max;

  bool operator==(const EntryKey&) const = default;
};

struct EntryKeyHash {
  std::size_t operator()(const EntryKey& k) const {
    auto mix = [](std::size_t h, double v) {
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(bits));
      h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    };
    std::size_t h = 0;
    h = mix(h, k.theta);
    h = mix(h, k.load);
    for (double t : k.interferers) h = mix(h, t);
    h = mix(h, k.rel_tol);
    h = mix(h, static_cast<double>(k.t_max));
    return h;
  }
};

}  // namespace

double log_slot_moment(double t, double theta) {
  // E[e^(-t Y)] = e^(1/theta) Gamma(1 - t/ln2, 1/theta) / theta^(t/ln2)
  double x = 1.0 / theta;
  double a = 1.0 - t / kLn2;
  return x + log_upper_incomplete_gamma(a, x) - (t / kLn2) * std::log(theta);
}

namespace {

double log_zeta0_minimized(const LinkBoundParams& params, int slots) {
  auto objective = [&](double t) {
    return t * params.load + slots * log_slot_moment(t, params.theta);
  };
  MinimizerResult res =
      minimize_scalar(objective, kChernoffTMin, kChernoffTMax);
  return res.value;
}

}  // namespace

double zeta0(const LinkBoundParams& params, int slots) {
  check_params(params);
  if (slots < 1) throw std::invalid_argument("zeta0: slots >= 1");
  return clip_probability(log_zeta0_minimized(params, slots));
}

double zeta1(const LinkBoundParams& params, int slots) {
  check_params(params);
  if (slots < 1) throw std::invalid_argument("zeta1: slots >= 1");
  if (params.interferer_thetas.empty())
    throw std::invalid_argument(
        "zeta1: interferer set is empty, zeta0 is the applicable bound");
  double raw = log_zeta0_minimized(params, slots) +
               slots * interference_log_factor(params);
  return clip_probability(raw);
}

DelayBoundEntry expected_delay_bound(const LinkBoundParams& params,
                                     double series_rel_tol, int series_t_max) {
  check_params(params);

  static std::mutex mutex;
  static std::unordered_map<EntryKey, DelayBoundEntry, EntryKeyHash> cache;
  EntryKey key{quantize12(params.theta), quantize12(params.load), {},
               series_rel_tol, series_t_max};
  for (double th : params.interferer_thetas)
    key.interferers.push_back(quantize12(th));
  std::sort(key.interferers.begin(), key.interferers.end());
  // Computation runs under the cache lock: the shared raw-curve memo is not
  // otherwise synchronized, and entry construction is cheap.
  std::scoped_lock lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  RawTailCurve& curve = raw_curve_for(params.theta, params.load);
  double log_factor = params.interferer_thetas.empty()
                          ? 0.0
                          : interference_log_factor(params);

  DelayBoundEntry entry;
  double running = std::numeric_limits<double>::infinity();
  auto term = [&](int slots) {
    double raw = curve.value(slots) + slots * log_factor;
    double z = clip_probability(raw);
    // P[T > T] <= P[T > T-1] <= bound(T-1), so the running minimum is still
    // a valid tail bound and restores monotonicity lost to grid resolution.
    running = std::min(running, z);
    if (entry.zeta.size() < kStoredZetaTerms) entry.zeta.push_back(running);
    return running;
  };
  SeriesResult series =
      truncated_series_sum(term, series_rel_tol, series_t_max);
  entry.bound_slots = 1.0 + series.sum;
  entry.truncation = series.terms;
  entry.converged = series.converged;

  return cache.emplace(key, std::move(entry)).first->second;
}

DelayBoundTable::DelayBoundTable(const NetworkInstance& instance)
    : instance_(&instance) {}

const DelayBoundEntry& DelayBoundTable::entry(
    const NodeId& tx, const NodeId& rx,
    std::optional<NodeId> interferer) const {
  int tx_ord = instance_->ordinal_of(tx);
  int rx_ord = instance_->ordinal_of(rx);
  int if_ord = interferer ? instance_->ordinal_of(*interferer) : -1;
  if (tx_ord == rx_ord)
    throw std::invalid_argument("link bound: transmitter equals receiver");
  if (if_ord == tx_ord || if_ord == rx_ord)
    throw std::invalid_argument(
        "link bound: interferer coincides with an endpoint");

  std::uint64_t key = (static_cast<std::uint64_t>(tx_ord) << 42) |
                      (static_cast<std::uint64_t>(rx_ord) << 21) |
                      static_cast<std::uint64_t>(if_ord + 1);
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;

  LinkBoundParams params;
  params.theta = instance_->theta(tx, rx);
  params.load = instance_->load();
  if (interferer)
    params.interferer_thetas.push_back(instance_->theta(*interferer, rx));
  return entries_.emplace(key, expected_delay_bound(params)).first->second;
}

double DelayBoundTable::link_bound(const NodeId& tx, const NodeId& rx,
                                   std::optional<NodeId> interferer) const {
  return entry(tx, rx, interferer).bound_slots;
}

}  // namespace hetcache
