#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psidensity/integer_set.hpp"
#include "psidensity/weight.hpp"

namespace psidensity {

// One checkpoint of a weighted partial-sum series. In log-space mode num and
// den hold logarithms; the ratio is always linear and lies in [0, 1].
struct Checkpoint {
  std::uint64_t n = 0;
  double num = 0.0;
  double den = 0.0;
  double ratio = 0.0;
};

struct DensitySeries {
  std::vector<Checkpoint> points;
  bool log_space = false;
  std::uint64_t start_k = 1;  // first summed integer (above the weight's domain)
  std::string set_spec, weight_name;
};

// Geometric checkpoint schedule ceil(2^{j/2}) up to N, deduplicated, plus N.
std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t N);

// Single streaming pass accumulating A_psi(n) and the full weighted sum with
// compensated summation (log-sum-exp when the weight is log-space flagged).
DensitySeries partial_sums(const IntegerSet& A, const Weight& w, std::uint64_t N,
                           const std::vector<std::uint64_t>* schedule = nullptr);

// Finite-truncation surrogate for the lower/upper density: min/max checkpoint
// ratio over the tail window [window_fraction*N, N].
struct DensityEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double point = 0.0;
  std::uint64_t N = 0;
  std::uint64_t window_start = 0;
  bool converged = false;  // upper - lower <= tol
  DensitySeries series;
  std::string warning;  // non-empty when a hypothesis check failed
};

DensityEstimate density_estimate(const IntegerSet& A, const Weight& w, std::uint64_t N,
                                 double window_fraction = 0.5, double tol = 0.02);

// Same bracket computed along the set's own elements: evaluates
// S_psi(v_n)/psi(v_n) over the first M members v_1 < v_2 < ... of A.
// Requires w in D1, or in D2 with the ratio psi'(v_n)/psi(n) checked
// numerically (a warning is attached when it is not decreasing toward 0).
DensityEstimate density_via_subsequence(const IntegerSet& A, const Weight& w, std::uint64_t M,
                                        double window_fraction = 0.5, double tol = 0.02);

// Bracket of n/v_n over the tail window (asymptotic density of the range of
// a strictly increasing sequence).
DensityEstimate seq_density(std::span<const std::uint64_t> v, double window_fraction = 0.5,
                            double tol = 0.02);
DensityEstimate seq_density(const IntegerSet& A, std::uint64_t M, double window_fraction = 0.5,
                            double tol = 0.02);

}  // namespace psidensity
