#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psidensity/weight.hpp"

namespace psidensity {

using Trace = std::vector<std::pair<double, double>>;

// Five growth traces sampled on one geometric grid, with summary verdicts.
struct GrowthDiagnostics {
  Trace order_trace;         // log psi(x) / log x
  Trace asv_trace;           // psi(x+1)/psi(x)
  Trace cond2_trace;         // x * log(psi(x+1)/psi(x))
  Trace logconcavity_trace;  // psi'(x)/psi(x)
  Trace hyper_trace;         // log psi(x) / x

  bool finite_order = false;     // order_trace bounded (no upward trend)
  bool asv = false;              // asv_trace -> 1
  bool cond2_bounded = false;    // cond2_trace bounded
  bool log_concave = false;      // logconcavity_trace non-increasing
  bool hyper_growth_ok = false;  // hyper_trace -> 0
  // order limit estimate: last two order samples extrapolated linearly in 1/log x
  double order_estimate = 0.0;
  double order_final = 0.0;
  double cond2_sup = 0.0;
};

GrowthDiagnostics growth_diagnostics(const Weight& w, double X, int grid_size = 128);

// Breakpoint ratio psi(x_n + 1)/psi(x_n) and order samples at segment
// midpoints for the piecewise-linear weight, evaluated from the exact
// segment formulas in log space.
struct PwlLimitReport {
  double p = 0.0;
  // (n, ratio) with ratio = 1 + exp(t_n); +inf once t_n overflows
  Trace ratio_trace;
  // (n, log psi(y_n)/log y_n) at midpoints y_n = (x_n + x_{n+1})/2
  Trace order_trace;
  double final_ratio = 0.0;
  double final_order = 0.0;
};

PwlLimitReport pwl_limit_check(double p, int n_max);

// Samples psi(a n + b)/psi(n) in log space over n <= X, reporting the tail
// sup C-hat and the implied order bound log C-hat / log a, cross-checked
// against the measured order of psi.
struct RatioBoundednessReport {
  double a = 0.0, b = 0.0;
  Trace log_ratio_trace;  // (n, log(psi(an+b)/psi(n)))
  bool bounded = false;   // trace settled rather than growing
  double c_hat = 0.0;     // sup over the tail [X/2, X]
  double order_bound = 0.0;      // log c_hat / log a
  double measured_order = 0.0;   // extrapolated order estimate from the trace
  double measured_order_raw = 0.0;  // final raw order sample
  bool order_cross_check = false;   // measured_order <= order_bound + 0.05
};

RatioBoundednessReport ratio_boundedness_check(const Weight& w, double a, double b, double X);

// Lebesgue measure of E = {t : psi'(t)/psi(t) > eps} intersected with
// (r0, x], measured by deterministic panel sampling with refinement where
// the indicator flips, divided by x, at geometric x up to X.
struct ExceptionalSetReport {
  double eps = 0.0;
  Trace density_trace;  // (x, |E ∩ (r0, x]| / x)
  double final_density = 0.0;
  double measure_at_X = 0.0;
  bool tends_to_zero = false;
  bool precondition_ok = true;  // hyper-growth verdict of the weight
};

ExceptionalSetReport exceptional_set_density(const Weight& w, double eps, double X,
                                             int panels = 100000);

}  // namespace psidensity
