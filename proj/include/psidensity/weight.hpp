#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace psidensity {

enum class WeightClass { D1, D2, Neither };

std::string to_string(WeightClass c);

// Specification for a programmatic weight. `value`/`deriv` are required;
// log-space evaluators are required whenever the weight is flagged
// log_space (fast growers that overflow double before x = 1e8).
struct WeightSpec {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> log_value;  // optional
  std::function<double(double)> log_deriv;  // optional
  WeightClass declared_class = WeightClass::Neither;
  double domain_start = 0.0;  // psi defined and positive on (domain_start, inf)
  bool log_space = false;
  // breakpoints of a piecewise definition inside [lo, hi], if any
  std::function<std::vector<double>(double, double)> hints;
};

// Immutable weight function psi with evaluators for psi and psi'.
// Construction validates positivity, strict increase and unboundedness on a
// sample grid and rejects bounded weights.
class Weight {
public:
  double value(double x) const;
  double deriv(double x) const;
  double log_value(double x) const;  // falls back to log(value(x))
  double log_deriv(double x) const;
  bool log_space() const;
  double domain_start() const;
  WeightClass declared_class() const;
  const std::string& name() const;
  // first integer k with k > domain_start (summation starts here)
  std::uint64_t first_integer() const;
  std::vector<double> refinement_hints(double lo, double hi) const;

  static Weight custom(WeightSpec spec);

  struct Impl;
  explicit Weight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
  std::shared_ptr<const Impl> impl_;
};

Weight make_power(double q);
Weight make_log();
Weight make_xlogx();
Weight make_exp_sqrt();
Weight make_exp_power(double sigma);
Weight make_piecewise_linear(double p);

// CLI weight specifications: pow:q | log | xlogx | expsqrt | exppow:sigma |
// pwl:p | id. Throws std::invalid_argument naming the offending token.
Weight parse_weight(std::string_view spec);

struct ClassifyResult {
  WeightClass diagnosis = WeightClass::Neither;
  bool deriv_nonincreasing = false;  // concave evidence
  bool deriv_nondecreasing = false;  // convex evidence
  double final_step_ratio = 0.0;     // psi(n+1)/psi(n) at the largest grid integer
  bool matches_declared = false;
};

// Diagnoses D1/D2 membership from sampled first-derivative monotonicity and
// the measured psi(n+1)/psi(n) step ratio. Advisory; compared against the
// declared class. Requires points >= 1000 and X >= 1e4.
ClassifyResult classify(const Weight& w, double X = 1e4, int points = 2000,
                        double step_tol = 0.05);

struct RatioTrace {
  std::vector<std::pair<double, double>> samples;  // (x or n, ratio)
  double final_value = 0.0;
  bool converged = false;  // |final - target| <= tol, target 1 or 0 per op
  double tail_sup = 0.0;   // for log_derivative_trace
};

// Sum_{k=k0}^{n} psi'(k) / psi(n) at checkpoints n = 2^j <= N.
// k0 is the first integer above domain_start. Requires N >= 1000.
RatioTrace check_asym(const Weight& w, std::uint64_t N, double tol = 0.02);

// psi'(x)/psi(x) sampled geometrically on [max(1, domain_start'), X];
// reports the sup over the tail [X/2, X]. Requires X >= 100.
RatioTrace log_derivative_trace(const Weight& w, double X, int points = 400);

}  // namespace psidensity
