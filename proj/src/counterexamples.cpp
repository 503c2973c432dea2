#include "psidensity/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "psidensity/stable_sum.hpp"

namespace psidensity {

namespace {

// order limit estimate from the last two samples of log psi/log x, linear in
// 1/log x (the catalog's finite-order weights satisfy p + c/log x + o(1/log x))
double order_extrapolate(const Trace& order) {
  const auto& [x2, f2] = order.back();
  const auto& [x1, f1] = order[order.size() - 2];
  const double u1 = 1.0 / std::log(x1), u2 = 1.0 / std::log(x2);
  const double c = (f1 - f2) / (u1 - u2);
  return f2 - c * u2;
}

bool trend_to(const Trace& t, double target, double tol) {
  // final value close to target, and the last quartile not drifting away
  const double last = t.back().second;
  if (std::abs(last - target) > tol) return false;
  const size_t q = t.size() - t.size() / 4;
  const double mid = t[q - 1].second;
  return std::abs(last - target) <= std::abs(mid - target) + tol;
}

}  // namespace

GrowthDiagnostics growth_diagnostics(const Weight& w, double X, int grid_size) {
  if (X < 1e3 || grid_size < 100)
    throw std::invalid_argument("growth_diagnostics: need X >= 1e3 and >= 100 grid points");
  const double lo = std::max(1.0 + 1e-9, w.domain_start() + 1e-6);
  GrowthDiagnostics g;
  for (int i = 0; i <= grid_size; ++i) {
    const double x = lo * std::pow(X / lo, double(i) / grid_size);
    const double lv = w.log_value(x);
    const double lstep = w.log_value(x + 1.0) - lv;
    g.order_trace.push_back({x, lv / std::log(x)});
    g.asv_trace.push_back({x, std::exp(lstep)});
    g.cond2_trace.push_back({x, x * lstep});
    g.logconcavity_trace.push_back({x, std::exp(w.log_deriv(x) - lv)});
    g.hyper_trace.push_back({x, lv / x});
  }
  g.order_final = g.order_trace.back().second;
  g.order_estimate = order_extrapolate(g.order_trace);
  // bounded: no upward trend over the last quartile and finite samples
  {
    const size_t q = g.order_trace.size() - g.order_trace.size() / 4;
    g.finite_order = g.order_trace.back().second <=
                     g.order_trace[q - 1].second + 0.05 * std::abs(g.order_trace[q - 1].second) + 0.05;
  }
  g.asv = trend_to(g.asv_trace, 1.0, 0.01);
  g.cond2_sup = 0.0;
  for (const auto& [x, v] : g.cond2_trace) g.cond2_sup = std::max(g.cond2_sup, v);
  {
    const size_t q = g.cond2_trace.size() - g.cond2_trace.size() / 4;
    g.cond2_bounded =
        g.cond2_trace.back().second <= g.cond2_trace[q - 1].second + 0.1 * g.cond2_sup + 0.5;
  }
  g.log_concave = true;
  for (size_t i = 1; i < g.logconcavity_trace.size(); ++i)
    if (g.logconcavity_trace[i].second >
        g.logconcavity_trace[i - 1].second * (1.0 + 1e-9))
      g.log_concave = false;
  g.hyper_growth_ok = trend_to(g.hyper_trace, 0.0, 0.01);
  return g;
}

PwlLimitReport pwl_limit_check(double p, int n_max) {
  if (!(p > 1.0)) throw std::invalid_argument("pwl_limit_check: p must be > 1");
  if (n_max < 1) throw std::invalid_argument("pwl_limit_check: n_max must be >= 1");
  PwlLimitReport rep;
  rep.p = p;
  // L_n = p^n log 2 must stay within double range
  std::vector<double> L;
  double e = p * std::log(2.0);
  for (int n = 0; n <= n_max + 1 && e < 1e297; ++n) {
    L.push_back(e);
    e *= p;
  }
  const int usable = static_cast<int>(L.size()) - 1;
  for (int n = 1; n <= std::min(n_max, usable); ++n) {
    const double Ln = L[n - 1], Ln1 = L[n];
    const double d = Ln - Ln1;  // < 0
    // ratio = 1 + (x_{n+1}^p - x_n^p) / (x_n^p (x_{n+1} - x_n))
    const double t = p * Ln1 + log1m_exp(p * d) - p * Ln - Ln1 - log1m_exp(d);
    const double ratio = t > 700.0 ? std::numeric_limits<double>::infinity()
                                   : 1.0 + std::exp(t);
    rep.ratio_trace.push_back({double(n), ratio});
    // midpoint y_n = (x_n + x_{n+1})/2: psi(y_n) = (x_n^p + x_{n+1}^p)/2
    const double log_y = Ln1 + std::log1p(std::exp(d)) - std::log(2.0);
    const double log_psi_y = p * Ln1 + std::log1p(std::exp(p * d)) - std::log(2.0);
    rep.order_trace.push_back({double(n), log_psi_y / log_y});
  }
  if (rep.ratio_trace.empty())
    throw std::invalid_argument("pwl_limit_check: no representable breakpoints");
  rep.final_ratio = rep.ratio_trace.back().second;
  rep.final_order = rep.order_trace.back().second;
  return rep;
}

RatioBoundednessReport ratio_boundedness_check(const Weight& w, double a, double b, double X) {
  if (!(a >= 2.0)) throw std::invalid_argument("ratio_boundedness_check: a must be >= 2");
  if (X < 1e3) throw std::invalid_argument("ratio_boundedness_check: X must be >= 1e3");
  RatioBoundednessReport rep;
  rep.a = a;
  rep.b = b;
  const double lo = std::max(1.0 + 1e-9, w.domain_start() + 1e-6);
  const int points = 256;
  Trace order;
  double sup_tail = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= points; ++i) {
    const double n = lo * std::pow(X / lo, double(i) / points);
    const double lr = w.log_value(a * n + b) - w.log_value(n);
    rep.log_ratio_trace.push_back({n, lr});
    order.push_back({n, w.log_value(n) / std::log(n)});
    if (n >= X / 2) sup_tail = std::max(sup_tail, lr);
  }
  rep.c_hat = std::exp(sup_tail);
  rep.order_bound = sup_tail / std::log(a);
  rep.measured_order_raw = order.back().second;
  rep.measured_order = order_extrapolate(order);
  // bounded: the log-ratio stopped growing over the last quartile
  const size_t q = rep.log_ratio_trace.size() - rep.log_ratio_trace.size() / 4;
  const double last = rep.log_ratio_trace.back().second;
  rep.bounded = last <= rep.log_ratio_trace[q - 1].second + 0.05 * std::abs(last) + 0.05;
  rep.order_cross_check = rep.bounded && rep.measured_order <= rep.order_bound + 0.05;
  return rep;
}

ExceptionalSetReport exceptional_set_density(const Weight& w, double eps, double X,
                                             int panels) {
  if (!(eps > 0.0)) throw std::invalid_argument("exceptional_set_density: eps must be > 0");
  if (X < 1e3) throw std::invalid_argument("exceptional_set_density: X must be >= 1e3");
  ExceptionalSetReport rep;
  rep.eps = eps;
  {
    const auto g = growth_diagnostics(w, std::max(1e3, X / 10.0), 128);
    rep.precondition_ok = g.hyper_growth_ok;
  }
  const double r0 = std::max(w.domain_start(), 0.0);
  const double start = r0 + 1e-9;
  auto in_e = [&](double t) { return std::exp(w.log_deriv(t) - w.log_value(t)) > eps; };

  // deterministic panel grid: uniform panels plus the weight's own breakpoints
  std::vector<double> bounds;
  bounds.reserve(panels + 8);
  const double width = (X - start) / panels;
  for (int i = 0; i <= panels; ++i) bounds.push_back(start + width * i);
  for (double h : w.refinement_hints(start, X)) bounds.push_back(h);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  // measure of E ∩ (r0, x] accumulated panel by panel; bisection refinement
  // wherever the endpoint/midpoint indicators disagree
  StableSum measure;
  std::vector<std::pair<double, double>> pending;  // refined subpanels
  const double min_width = std::max(1e-7, X * 1e-12);

  // geometric report points
  std::vector<double> xs;
  for (double x = std::max(start * 2.0, 8.0); x < X; x *= 2.0) xs.push_back(x);
  xs.push_back(X);
  size_t xi = 0;

  std::function<void(double, double, bool, bool, int)> refine =
      [&](double lo, double hi, bool elo, bool ehi, int depth) {
        const double mid = 0.5 * (lo + hi);
        const bool emid = in_e(mid);
        if (depth >= 40 || hi - lo <= min_width) {
          if (emid) measure.add(hi - lo);
          return;
        }
        if (elo == emid && emid == ehi) {
          if (emid) measure.add(hi - lo);
          return;
        }
        refine(lo, mid, elo, emid, depth + 1);
        refine(mid, hi, emid, ehi, depth + 1);
      };

  for (size_t i = 0; i + 1 < bounds.size(); ++i) {
    const double lo = bounds[i], hi = bounds[i + 1];
    if (hi <= lo) continue;
    const bool elo = in_e(lo + (hi - lo) * 1e-9), ehi = in_e(hi);
    const bool emid = in_e(0.5 * (lo + hi));
    if (elo != emid || emid != ehi)
      refine(lo, hi, elo, ehi, 0);
    else if (emid)
      measure.add(hi - lo);
    while (xi < xs.size() && hi >= xs[xi]) {
      rep.density_trace.push_back({xs[xi], measure.value() / xs[xi]});
      ++xi;
    }
  }
  while (xi < xs.size()) {
    rep.density_trace.push_back({xs[xi], measure.value() / xs[xi]});
    ++xi;
  }
  rep.measure_at_X = measure.value();
  rep.final_density = rep.density_trace.back().second;
  const size_t q = rep.density_trace.size() - rep.density_trace.size() / 4;
  rep.tends_to_zero = rep.final_density < 0.01 &&
                      rep.final_density <= rep.density_trace[q - 1].second + 1e-12;
  return rep;
}

}  // namespace psidensity
