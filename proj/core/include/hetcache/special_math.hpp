#pragma once

#include <functional>

namespace hetcache {

// Upper incomplete gamma integral from x to infinity of s^(a-1) e^(-s) ds,
// for x > 0 and any real a (the integral converges at the upper end for all
// a, and the x > 0 lower end keeps it finite for a <= 0, where standard
// library routines give up). Evaluated by panelled adaptive quadrature.
double upper_incomplete_gamma(double a, double x);

// log of the above, stable where the plain value would under/overflow
// (x in the hundreds, or strongly negative a at tiny x).
double log_upper_incomplete_gamma(double a, double x);

struct MinimizerResult {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  // argmin pinned to a bracket edge; the true infimum may lie outside
  bool at_lower_edge = false;
  bool at_upper_edge = false;
};

struct MinimizeOptions {
  int grid_points = 129;     // coarse scan before golden-section refinement
  double tol = 1e-6;         // absolute tolerance on the argmin
  int max_iterations = 200;  // golden-section cap
};

// Scalar minimization on [lo, hi]: coarse grid scan to pick a basin, then
// golden-section inside it. The reported value is the smallest objective
// value actually evaluated, so it never exceeds the grid minimum.
MinimizerResult minimize_scalar(const std::function<double(double)>& objective,
                                double lo, double hi,
                                const MinimizeOptions& options = {});

struct SeriesResult {
  double sum = 0.0;
  int terms = 0;        // index of the last term added
  bool converged = false;
};

// Sums term(1) + term(2) + ... of non-negative terms, stopping once
// term(T) <= rel_tol * partial_sum, or flagging non-convergence at t_max.
SeriesResult truncated_series_sum(const std::function<double(int)>& term,
                                  double rel_tol = 1e-6, int t_max = 10000);

}  // namespace hetcache
