#include "psidensity/series_density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "psidensity/stable_sum.hpp"

namespace psidensity {

namespace {

// Euler-Maclaurin zeta partial: sum_{n<=M} n^{-p} + M^{1-p}/(p-1) + M^{-p}/2
// + p M^{-p-1}/12 - p(p+1)(p+2) M^{-p-3}/720. Used only for the 1/zeta(p)
// normalization; accuracy ~1e-15 relative at M = 1e4.
double zeta_em(double p) {
  const int M = 10000;
  StableSum s;
  for (int n = 1; n <= M; ++n) s.add(std::pow(n, -p));
  const double m = M;
  double z = s.value();
  z += std::pow(m, 1.0 - p) / (p - 1.0);
  z += 0.5 * std::pow(m, -p);
  z += p * std::pow(m, -p - 1.0) / 12.0;
  z -= p * (p + 1.0) * (p + 2.0) * std::pow(m, -p - 3.0) / 720.0;
  return z;
}

std::uint64_t analytic_truncation(double p, double tol) {
  // modeled residual ~ 2*(d-hat error + EM term) ~ 2 N^{-p}; solve 2 N^{-p} <= tol
  const double n = std::pow(2.0 / tol, 1.0 / p);
  const double capped = std::min(n, 4.0e9);
  return std::max<std::uint64_t>(4096, static_cast<std::uint64_t>(std::ceil(capped)));
}

}  // namespace

SeriesDensityEstimate analytic_density(const IntegerSet& A, std::vector<double> p_grid,
                                       double tol, AnalyticNorm norm,
                                       std::uint64_t n_override) {
  if (p_grid.empty()) throw std::invalid_argument("analytic_density: empty grid");
  for (double p : p_grid)
    if (!(p > 1.0 && p <= 2.0))
      throw std::invalid_argument("analytic_density: grid value " + std::to_string(p) +
                                  " outside (1, 2]");
  std::sort(p_grid.begin(), p_grid.end(), std::greater<double>());

  SeriesDensityEstimate out;
  out.method = SeriesMethod::Analytic;
  out.norm = norm;
  for (double p : p_grid) {
    const std::uint64_t N = n_override ? n_override : analytic_truncation(p, tol);
    if (N > A.query_limit())
      throw std::out_of_range("analytic_density: needs N=" + std::to_string(N) +
                              " beyond query limit of set " + A.spec());
    StableSum partial;
    for (std::uint64_t n = 1; n <= N; ++n)
      if (A.contains(n)) partial.add(std::pow(static_cast<double>(n), -p));

    const std::uint64_t h = N / 2, q = N / 4;
    const double d_hat =
        static_cast<double>(A.count_up_to(N) - A.count_up_to(h)) / static_cast<double>(N - h);
    const double d_hat_prev =
        static_cast<double>(A.count_up_to(h) - A.count_up_to(q)) / static_cast<double>(h - q);

    SeriesGridPoint g;
    g.param = p;
    g.N = N;
    g.d_hat = d_hat;
    g.d_hat_prev = d_hat_prev;
    const double tail_mass = std::pow(static_cast<double>(N), 1.0 - p);  // (p-1)*∫_N^∞ t^-p
    g.tail_correction = d_hat * tail_mass;
    const double drift = std::abs(d_hat - d_hat_prev);
    g.flagged = drift > 0.05;
    g.tail_bound = tail_mass * (drift + 8.0 / static_cast<double>(N)) +
                   (p - 1.0) * std::pow(static_cast<double>(N), -p);
    g.value = (p - 1.0) * partial.value() + g.tail_correction;
    if (norm == AnalyticNorm::InverseZeta) {
      const double scale = (p - 1.0) * zeta_em(p);
      g.value /= scale;
      g.tail_bound /= scale;
      g.tail_correction /= scale;
    }
    out.grid.push_back(g);
  }
  // linear extrapolation in (p-1) from the two grid points nearest 1
  if (out.grid.size() >= 2) {
    const auto& g1 = out.grid[out.grid.size() - 2];
    const auto& g2 = out.grid.back();
    const double x1 = g1.param - 1.0, x2 = g2.param - 1.0;
    out.extrapolated = g2.value + (g1.value - g2.value) / (x1 - x2) * (0.0 - x2);
  } else {
    out.extrapolated = out.grid.back().value;
  }
  return out;
}

SeriesDensityEstimate abel_density(const IntegerSet& A, std::vector<double> x_grid,
                                   double rel_tail) {
  if (x_grid.empty()) throw std::invalid_argument("abel_density: empty grid");
  for (double x : x_grid)
    if (!(x > 0.0 && x < 1.0))
      throw std::invalid_argument("abel_density: grid value " + std::to_string(x) +
                                  " outside (0, 1)");
  std::sort(x_grid.begin(), x_grid.end());

  SeriesDensityEstimate out;
  out.method = SeriesMethod::Abel;
  for (double x : x_grid) {
    const auto N =
        static_cast<std::uint64_t>(std::ceil(std::log(rel_tail) / std::log(x)));
    if (N > A.query_limit())
      throw std::out_of_range("abel_density: needs N=" + std::to_string(N) +
                              " beyond query limit of set " + A.spec());
    // sum ascending; x^n via log to keep the pass single and deterministic
    StableSum s;
    const double lx = std::log(x);
    for (std::uint64_t n = 1; n <= N; ++n)
      if (A.contains(n)) s.add(std::exp(static_cast<double>(n) * lx));
    SeriesGridPoint g;
    g.param = x;
    g.N = N;
    g.value = (1.0 - x) * s.value();
    g.tail_bound = rel_tail;
    g.tail_correction = 0.0;
    g.d_hat = g.d_hat_prev = 0.0;
    out.grid.push_back(g);
  }
  out.extrapolated = out.grid.back().value;
  return out;
}

KaramataReport karamata_instance_check(const IntegerSet& A, std::uint64_t N, double tol) {
  KaramataReport rep;
  rep.tol = tol;
  const auto abel = abel_density(A);
  const size_t m = abel.grid.size();
  const double spread =
      m >= 2 ? std::abs(abel.grid[m - 1].value - abel.grid[m - 2].value) : 1.0;
  rep.delta = abel.grid.back().value;
  rep.conclusive = spread < 1e-2;
  if (!rep.conclusive) {
    rep.note = "Abel grid not settled (last-step spread " + std::to_string(spread) + ")";
    return rep;
  }
  rep.pass = true;
  for (std::uint64_t n : {N / 4, N / 2, N}) {
    const double r = static_cast<double>(A.count_up_to(n)) / static_cast<double>(n);
    rep.counts.push_back({n, r});
    if (std::abs(r - rep.delta) > tol) rep.pass = false;
  }
  return rep;
}

}  // namespace psidensity
