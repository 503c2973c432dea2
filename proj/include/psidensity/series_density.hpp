#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psidensity/integer_set.hpp"

namespace psidensity {

enum class SeriesMethod { Analytic, Abel };
enum class AnalyticNorm { PMinusOne, InverseZeta };

struct SeriesGridPoint {
  double param = 0.0;       // p (analytic) or x (Abel)
  std::uint64_t N = 0;      // truncation used
  double value = 0.0;       // weighted series value after normalization
  double tail_bound = 0.0;  // bound on the tail-model uncertainty of `value`
  double tail_correction = 0.0;  // amount actually added for the tail
  double d_hat = 0.0;            // empirical density over [N/2, N] (analytic)
  double d_hat_prev = 0.0;       // same over [N/4, N/2]
  bool flagged = false;          // tail model unstable: |d_hat - d_hat_prev| > 0.05
};

struct SeriesDensityEstimate {
  std::vector<SeriesGridPoint> grid;
  double extrapolated = 0.0;
  SeriesMethod method = SeriesMethod::Analytic;
  AnalyticNorm norm = AnalyticNorm::PMinusOne;
};

inline const std::vector<double>& default_p_grid() {
  static const std::vector<double> g{1.2, 1.1, 1.05, 1.02, 1.01};
  return g;
}
inline const std::vector<double>& default_x_grid() {
  static const std::vector<double> g{0.9, 0.99, 0.999, 0.9999};
  return g;
}

// Truncated Dirichlet series (p-1) * [sum_{n<=N} chi_A(n) n^{-p} + tail],
// with the tail modeled as d_hat * integral_N^inf t^{-p} dt and d_hat the
// measured density of A over [N/2, N]. N is chosen so the modeled residual
// is <= tol, unless n_override pins it. Extrapolated value is linear in
// (p-1) from the two grid points closest to 1.
SeriesDensityEstimate analytic_density(const IntegerSet& A,
                                       std::vector<double> p_grid = default_p_grid(),
                                       double tol = 1e-4,
                                       AnalyticNorm norm = AnalyticNorm::PMinusOne,
                                       std::uint64_t n_override = 0);

// (1-x) * sum_{n<=N} x^n chi_A(n) with N = ceil(log(rel_tail)/log(x)) so the
// dropped tail is below rel_tail in absolute terms. No extrapolation: the
// reported limit estimate is the value at the grid point closest to 1.
SeriesDensityEstimate abel_density(const IntegerSet& A,
                                   std::vector<double> x_grid = default_x_grid(),
                                   double rel_tail = 1e-14);

// Instance check of the Tauberian conclusion with omega = 1: if the Abel
// density exists (grid settled to delta), then count_up_to(n)/n ~ delta.
struct KaramataReport {
  bool conclusive = false;  // Abel grid settled (last two values within 1e-2)
  double delta = 0.0;
  std::vector<std::pair<std::uint64_t, double>> counts;  // (n, A(n)/n) at N/4, N/2, N
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

KaramataReport karamata_instance_check(const IntegerSet& A, std::uint64_t N, double tol = 1e-2);

}  // namespace psidensity
