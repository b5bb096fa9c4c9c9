#include "hetcache/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hetcache {

namespace {

// 15-point Gauss-Kronrod rule with embedded 7-point Gauss error estimate,
// nodes/weights on [-1, 1].
constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct PanelEstimate {
  double integral;
  double error;
};

template <typename F>
PanelEstimate gauss_kronrod(const F& f, double lo, double hi) {
  double mid = 0.5 * (lo + hi);
  double half = 0.5 * (hi - lo);
  double gk = 0.0, g = 0.0;
  for (int i = 0; i < 15; ++i) {
    double v = f(mid + half * kKronrodNodes[i]);
    gk += kKronrodWeights[i] * v;
    if (i % 2 == 1) g += kGaussWeights[i / 2] * v;
  }
  gk *= half;
  g *= half;
  return {gk, std::abs(gk - g)};
}

// Adaptive bisection on top of GK15 until the panel error estimate drops
// below the absolute tolerance or 1e-12 of the panel value itself.
template <typename F>
double adaptive_panel(const F& f, double lo, double hi, double abs_tol,
                      int depth = 0) {
  PanelEstimate est = gauss_kronrod(f, lo, hi);
  if (est.error <= abs_tol + 1e-12 * std::abs(est.integral) || depth >= 24)
    return est.integral;
  double mid = 0.5 * (lo + hi);
  return adaptive_panel(f, lo, mid, 0.5 * abs_tol, depth + 1) +
         adaptive_panel(f, mid, hi, 0.5 * abs_tol, depth + 1);
}

constexpr double kGolden = 0.6180339887498949;  // 1/phi

}  // namespace

double log_upper_incomplete_gamma(double a, double x) {
  if (!(x > 0.0))
    throw std::invalid_argument(
        "upper_incomplete_gamma: requires x > 0 (the integral diverges at 0 "
        "for a <= 0)");
  if (!std::isfinite(a) || !std::isfinite(x))
    throw std::invalid_argument("upper_incomplete_gamma: non-finite argument");

  // Gamma(a, x) = e^(-x) x^(a-1) J with J = integral_0^inf (1+u/x)^(a-1)e^(-u) du.
  // J is tame for every (a, x) that reaches us, so quadrature runs on J and
  // the large factors stay symbolic in the log.
  auto integrand = [&](double u) {
    return std::exp((a - 1.0) * std::log1p(u / x) - u);
  };

  // Panel edges resolve the 1/x variation scale near u = 0, then double out
  // to the exponential cutoff.
  double u_max = 60.0 + 2.0 * std::abs(a - 1.0);
  std::vector<double> edges{0.0};
  double step = std::min(x, 1.0);
  double at = 0.0;
  while (at < 1.0 && step < 1.0) {
    at = std::min(at + step, 1.0);
    edges.push_back(at);
    step *= 2.0;
  }
  if (edges.back() < 1.0) edges.push_back(1.0);
  step = 1.0;
  at = 1.0;
  while (at < u_max) {
    at += step;
    edges.push_back(std::min(at, u_max));
    step *= 2.0;
  }

  double j_total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    j_total += adaptive_panel(integrand, edges[i], edges[i + 1],
                              1e-14 * j_total);
  }
  if (!(j_total > 0.0)) return -std::numeric_limits<double>::infinity();
  return -x + (a - 1.0) * std::log(x) + std::log(j_total);
}

double upper_incomplete_gamma(double a, double x) {
  return std::exp(log_upper_incomplete_gamma(a, x));
}

MinimizerResult minimize_scalar(const std::function<double(double)>& objective,
                                double lo, double hi,
                                const MinimizeOptions& options) {
  if (!(hi > lo)) throw std::invalid_argument("minimize_scalar: empty bracket");
  int n = std::max(options.grid_points, 3);

  MinimizerResult result;
  double best_t = lo, best_v = std::numeric_limits<double>::infinity();
  int best_idx = -1;
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    ts[i] = t;
    double v = objective(t);
    if (std::isfinite(v) && v < best_v) {
      best_v = v;
      best_t = t;
      best_idx = i;
    }
  }
  if (best_idx < 0)
    throw std::invalid_argument(
        "minimize_scalar: objective not finite anywhere on the bracket");

  result.at_lower_edge = best_idx == 0;
  result.at_upper_edge = best_idx == n - 1;

  // Golden-section inside the bracketing cell pair around the grid winner.
  double a = ts[std::max(best_idx - 1, 0)];
  double b = ts[std::min(best_idx + 1, n - 1)];
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  int iters = 0;
  while (b - a > options.tol && iters < options.max_iterations) {
    ++iters;
    if (std::isfinite(fc) && (!std::isfinite(fd) || fc < fd)) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = objective(d);
    }
    double t_cand = fc < fd ? c : d;
    double v_cand = std::min(fc, fd);
    if (std::isfinite(v_cand) && v_cand < best_v) {
      best_v = v_cand;
      best_t = t_cand;
    }
  }

  result.argmin = best_t;
  result.value = best_v;
  result.iterations = iters;
  result.converged = b - a <= options.tol;
  return result;
}

SeriesResult truncated_series_sum(const std::function<double(int)>& term,
                                  double rel_tol, int t_max) {
  if (rel_tol < 0.0) throw std::invalid_argument("truncated_series_sum: rel_tol < 0");
  if (t_max < 1) throw std::invalid_argument("truncated_series_sum: t_max < 1");
  SeriesResult result;
  for (int t = 1; t <= t_max; ++t) {
    double v = term(t);
    if (!(v >= 0.0))
      throw std::invalid_argument(
          "truncated_series_sum: terms must be non-negative");
    result.sum += v;
    result.terms = t;
    if (v <= rel_tol * result.sum) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace hetcache
