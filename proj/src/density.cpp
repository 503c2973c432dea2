#include "psidensity/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "psidensity/stable_sum.hpp"

namespace psidensity {

std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t N) {
  std::vector<std::uint64_t> out;
  for (int j = 0;; ++j) {
    const double v = std::pow(2.0, 0.5 * j);
    if (v > static_cast<double>(N)) break;
    const auto n = static_cast<std::uint64_t>(std::ceil(v));
    if (n > N) break;
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  if (out.empty() || out.back() != N) out.push_back(N);
  return out;
}

DensitySeries partial_sums(const IntegerSet& A, const Weight& w, std::uint64_t N,
                           const std::vector<std::uint64_t>* schedule) {
  if (N < 1) throw std::invalid_argument("partial_sums: N must be >= 1");
  if (N > A.query_limit())
    throw std::out_of_range("partial_sums: N=" + std::to_string(N) +
                            " beyond query limit of set " + A.spec());
  std::vector<std::uint64_t> own;
  if (!schedule) {
    own = checkpoint_schedule(N);
    schedule = &own;
  }
  DensitySeries series;
  series.log_space = w.log_space();
  series.start_k = w.first_integer();
  series.set_spec = A.spec();
  series.weight_name = w.name();

  auto cp = schedule->begin();
  const auto emit_at = [&](std::uint64_t k) {
    while (cp != schedule->end() && *cp < series.start_k) ++cp;
    return cp != schedule->end() && *cp == k;
  };

  if (series.log_space) {
    LogSumExp num, den;
    for (std::uint64_t k = series.start_k; k <= N; ++k) {
      const double ld = w.log_deriv(static_cast<double>(k));
      den.add_log(ld);
      if (A.contains(k)) num.add_log(ld);
      if (emit_at(k)) {
        const double ln = num.empty() ? -std::numeric_limits<double>::infinity()
                                      : num.log_value();
        const double ldv = den.log_value();
        series.points.push_back({k, ln, ldv, std::exp(ln - ldv)});
        ++cp;
      }
    }
  } else {
    StableSum num, den;
    for (std::uint64_t k = series.start_k; k <= N; ++k) {
      const double d = w.deriv(static_cast<double>(k));
      if (!std::isfinite(d))
        throw std::range_error("partial_sums: overflow in weight " + w.name() +
                               " at k=" + std::to_string(k) +
                               " (no log-space evaluators flagged)");
      den.add(d);
      if (A.contains(k)) num.add(d);
      if (emit_at(k)) {
        const double nv = num.value(), dv = den.value();
        if (!std::isfinite(dv))
          throw std::range_error("partial_sums: accumulated overflow in weight " + w.name());
        series.points.push_back({k, nv, dv, nv / dv});
        ++cp;
      }
    }
  }
  return series;
}

namespace {

DensityEstimate bracket_of(DensitySeries series, std::uint64_t N, double window_fraction,
                           double tol) {
  if (!(window_fraction > 0.0 && window_fraction < 1.0))
    throw std::invalid_argument("window fraction must lie in (0,1)");
  DensityEstimate est;
  est.N = N;
  est.window_start = static_cast<std::uint64_t>(window_fraction * static_cast<double>(N));
  est.lower = 1.0;
  est.upper = 0.0;
  bool any = false;
  for (const auto& p : series.points) {
    if (p.n < est.window_start) continue;
    est.lower = std::min(est.lower, p.ratio);
    est.upper = std::max(est.upper, p.ratio);
    any = true;
  }
  if (!any) throw std::invalid_argument("density window contains no checkpoints");
  est.point = series.points.back().ratio;
  est.converged = (est.upper - est.lower) <= tol;
  est.series = std::move(series);
  return est;
}

}  // namespace

DensityEstimate density_estimate(const IntegerSet& A, const Weight& w, std::uint64_t N,
                                 double window_fraction, double tol) {
  return bracket_of(partial_sums(A, w, N), N, window_fraction, tol);
}

DensityEstimate density_via_subsequence(const IntegerSet& A, const Weight& w, std::uint64_t M,
                                        double window_fraction, double tol) {
  if (w.declared_class() == WeightClass::Neither)
    throw std::invalid_argument("density_via_subsequence: weight " + w.name() +
                                " is neither D1 nor D2");
  if (M < 8) throw std::invalid_argument("density_via_subsequence: M must be >= 8");

  const auto schedule = checkpoint_schedule(M);
  DensitySeries series;
  series.log_space = w.log_space();
  series.set_spec = A.spec();
  series.weight_name = w.name();

  // hypothesis trace psi'(v_n)/psi(n), sampled at checkpoints (D2 only)
  std::vector<double> hyp;

  auto cp = schedule.begin();
  LogSumExp lacc;
  StableSum acc;
  std::uint64_t v = 0;
  const std::uint64_t k0 = w.first_integer();
  for (std::uint64_t n = 1; n <= M; ++n) {
    const auto nxt = A.next_member(v);
    if (!nxt) break;  // finite set: bracket over what exists
    v = *nxt;
    if (v < k0)
      throw std::invalid_argument("density_via_subsequence: member " + std::to_string(v) +
                                  " below the domain of weight " + w.name());
    const double vx = static_cast<double>(v);
    if (series.log_space)
      lacc.add_log(w.log_deriv(vx));
    else {
      const double d = w.deriv(vx);
      if (!std::isfinite(d))
        throw std::range_error("density_via_subsequence: overflow in weight " + w.name());
      acc.add(d);
    }
    if (cp != schedule.end() && *cp == n) {
      double ratio, num, den;
      if (series.log_space) {
        num = lacc.log_value();
        den = w.log_value(vx);
        ratio = std::exp(num - den);
      } else {
        num = acc.value();
        den = w.value(vx);
        ratio = num / den;
      }
      series.points.push_back({n, num, den, ratio});
      if (w.declared_class() == WeightClass::D2 && static_cast<double>(n) > w.domain_start())
        hyp.push_back(std::exp(w.log_deriv(vx) - w.log_value(static_cast<double>(n))));
      ++cp;
    }
  }
  if (series.points.empty())
    throw std::invalid_argument("density_via_subsequence: set has no members");

  auto est = bracket_of(std::move(series), M, window_fraction, tol);
  if (!hyp.empty()) {
    // hypothesis (b): the trace should head to 0
    const double last = hyp.back();
    const bool decreasing = hyp.size() < 2 || last <= hyp[hyp.size() / 2] + 1e-12;
    if (!decreasing || last > 0.1)
      est.warning = "subsequence hypothesis psi'(v_n)/psi(n) -> 0 not observed (last=" +
                    std::to_string(last) + ")";
  }
  return est;
}

DensityEstimate seq_density(std::span<const std::uint64_t> v, double window_fraction,
                            double tol) {
  if (v.size() < 4) throw std::invalid_argument("seq_density: need at least 4 terms");
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1])
      throw std::invalid_argument("seq_density: sequence not strictly increasing at index " +
                                  std::to_string(i + 1));
  const std::uint64_t M = v.size();
  DensitySeries series;
  series.set_spec = "sequence";
  series.weight_name = "id";
  for (std::uint64_t n : checkpoint_schedule(M)) {
    const double ratio = static_cast<double>(n) / static_cast<double>(v[n - 1]);
    series.points.push_back({n, static_cast<double>(n), static_cast<double>(v[n - 1]), ratio});
  }
  return bracket_of(std::move(series), M, window_fraction, tol);
}

DensityEstimate seq_density(const IntegerSet& A, std::uint64_t M, double window_fraction,
                            double tol) {
  const auto v = A.members(M);
  if (v.size() < M)
    throw std::invalid_argument("seq_density: set " + A.spec() + " has fewer than " +
                                std::to_string(M) + " members in range");
  auto est = seq_density(std::span<const std::uint64_t>(v), window_fraction, tol);
  est.series.set_spec = A.spec();
  return est;
}

}  // namespace psidensity
