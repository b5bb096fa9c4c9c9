#pragma once

#include <cstdint>
#include <vector>

#include "hetcache/delay_bounds.hpp"

namespace hetcache {

// Slot-by-slot fading simulation for one link: per slot, the desired and
// interfering channel powers are independent unit-mean exponentials scaled
// by their thetas, and the accumulated log2(1 + SINR) is compared against
// the normalized load until the transfer completes.
struct TrialConfig {
  LinkBoundParams link;
  int trials = 100000;
  int max_slots = 1000;
  std::uint64_t seed = 1;
};

struct DelaySample {
  // delay_counts[T-1] = number of trials finishing in exactly T slots
  std::vector<std::uint64_t> delay_counts;
  std::uint64_t censored = 0;  // ran past max_slots
  std::uint64_t trials = 0;

  double mean_delay() const;  // censored trials enter as max_slots + 1
  // empirical P[T > slots]; censored trials count as exceeding
  double exceedance(int slots) const;
  // binomial standard error of exceedance(slots)
  double exceedance_stderr(int slots) const;
};

DelaySample sample_delay(const TrialConfig& config);

// Numerical cross-checks of every intermediate in the tail-bound derivation
// at a fixed Chernoff parameter t: the single-slot variable Z = e^(-t Y).
struct SlotLawReport {
  double t = 0.0;
  // interference-free: empirical vs analytic cdf of Z, and its mean
  double ks_distance_free = 0.0;
  double sample_mean_free = 0.0;
  double analytic_mean_free = 0.0;  // quadrature-backed closed form
  // interfered case: empirical vs analytic cdf
  double ks_distance_interfered = 0.0;
  // pointwise pdf domination f0(z) <= f(z) * (1 + sum theta') / theta^(|I|-1)
  bool pdf_domination_holds = true;
  double worst_pdf_margin = 0.0;  // min over the grid of (bound - f0)
};

// cdf of Z for the interference-free link at parameter t
double slot_variable_cdf(double z, double t, double theta);
// pdf of Z for the interference-free link
double slot_variable_pdf(double z, double t, double theta);
// cdf of Z with interferers present
double slot_variable_cdf_interfered(double z, double t, double theta,
                                    const std::vector<double>& interferer_thetas);
// pdf of Z with interferers present
double slot_variable_pdf_interfered(double z, double t, double theta,
                                    const std::vector<double>& interferer_thetas);

SlotLawReport validate_slot_law(const TrialConfig& config, double t,
                                 int pdf_grid_points = 99);

}  // namespace hetcache
