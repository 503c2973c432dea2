#include "psidensity/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "psidensity/stable_sum.hpp"

namespace psidensity {

std::string to_string(WeightClass c) {
  switch (c) {
    case WeightClass::D1: return "D1";
    case WeightClass::D2: return "D2";
    default: return "neither";
  }
}

struct Weight::Impl {
  WeightSpec spec;

  void check_domain(double x) const {
    if (!(x >= spec.domain_start))
      throw std::out_of_range("weight " + spec.name + ": x=" + std::to_string(x) +
                              " below domain start " + std::to_string(spec.domain_start));
  }
};

double Weight::value(double x) const {
  impl_->check_domain(x);
  return impl_->spec.value(x);
}

double Weight::deriv(double x) const {
  impl_->check_domain(x);
  return impl_->spec.deriv(x);
}

double Weight::log_value(double x) const {
  impl_->check_domain(x);
  if (impl_->spec.log_value) return impl_->spec.log_value(x);
  return std::log(impl_->spec.value(x));
}

double Weight::log_deriv(double x) const {
  impl_->check_domain(x);
  if (impl_->spec.log_deriv) return impl_->spec.log_deriv(x);
  return std::log(impl_->spec.deriv(x));
}

bool Weight::log_space() const { return impl_->spec.log_space; }
double Weight::domain_start() const { return impl_->spec.domain_start; }
WeightClass Weight::declared_class() const { return impl_->spec.declared_class; }
const std::string& Weight::name() const { return impl_->spec.name; }

std::uint64_t Weight::first_integer() const {
  const double r0 = impl_->spec.domain_start;
  if (r0 <= 1.0) return 1;
  return static_cast<std::uint64_t>(std::ceil(r0));
}

std::vector<double> Weight::refinement_hints(double lo, double hi) const {
  if (impl_->spec.hints) return impl_->spec.hints(lo, hi);
  return {};
}

namespace {

void validate_spec(const WeightSpec& s) {
  const double start = s.domain_start <= 0.0 ? 1e-3 : s.domain_start + 1e-6;
  const double X = 1e8;
  auto lval = [&](double x) {
    return s.log_space ? s.log_value(x) : std::log(s.value(x));
  };
  double prev = -std::numeric_limits<double>::infinity();
  const int n = 64;
  for (int i = 0; i <= n; ++i) {
    const double x = start * std::pow(X / start, double(i) / n);
    const double lv = lval(x);
    if (!std::isfinite(lv))
      throw std::invalid_argument("weight " + s.name + ": psi not finite/positive at x=" +
                                  std::to_string(x));
    if (lv < prev)
      throw std::invalid_argument("weight " + s.name + ": psi not increasing near x=" +
                                  std::to_string(x));
    prev = lv;
    if (s.log_space) {
      const double ld = s.log_deriv(x);
      if (std::isnan(ld) || ld == std::numeric_limits<double>::infinity())
        throw std::invalid_argument("weight " + s.name + ": psi' not positive at x=" +
                                    std::to_string(x));
    } else {
      const double d = s.deriv(x);
      if (!(d > 0.0) || !std::isfinite(d))
        throw std::invalid_argument("weight " + s.name + ": psi' not positive at x=" +
                                    std::to_string(x));
    }
  }
  // unboundedness: psi must at least quadruple between the domain start and 1e8
  const double growth = lval(X) - lval(start);
  if (!(growth >= std::log(4.0)))
    throw std::invalid_argument("weight " + s.name +
                                ": bounded weights are rejected (psi(1e8)/psi(x0) = " +
                                std::to_string(std::exp(growth)) + " < 4)");
}

}  // namespace

Weight Weight::custom(WeightSpec spec) {
  if (!spec.value || !spec.deriv)
    throw std::invalid_argument("weight " + spec.name + ": value and deriv are required");
  if (spec.log_space && (!spec.log_value || !spec.log_deriv))
    throw std::invalid_argument("weight " + spec.name +
                                ": log-space weights need log evaluators");
  validate_spec(spec);
  auto impl = std::make_shared<Impl>();
  impl->spec = std::move(spec);
  return Weight(std::move(impl));
}

Weight make_power(double q) {
  if (!(q > 0))
    throw std::invalid_argument("pow: exponent must be > 0 (got " + std::to_string(q) + ")");
  WeightSpec s;
  s.name = q == 1.0 ? "id" : "pow:" + std::to_string(q);
  s.value = [q](double x) { return std::pow(x, q); };
  s.deriv = [q](double x) { return q * std::pow(x, q - 1.0); };
  s.log_value = [q](double x) { return q * std::log(x); };
  s.log_deriv = [q](double x) { return std::log(q) + (q - 1.0) * std::log(x); };
  // q = 1 is both concave and convex; tagged D1 so the tag is deterministic
  s.declared_class = q <= 1.0 ? WeightClass::D1 : WeightClass::D2;
  return Weight::custom(std::move(s));
}

Weight make_log() {
  WeightSpec s;
  s.name = "log";
  s.value = [](double x) { return std::log1p(x); };
  s.deriv = [](double x) { return 1.0 / (1.0 + x); };
  s.log_value = [](double x) { return std::log(std::log1p(x)); };
  s.log_deriv = [](double x) { return -std::log1p(x); };
  s.declared_class = WeightClass::D1;
  return Weight::custom(std::move(s));
}

Weight make_xlogx() {
  // psi' (x) = 1 + log x, so psi'(1) = 1
  WeightSpec s;
  s.name = "xlogx";
  s.value = [](double x) { return x * std::log(x); };
  s.deriv = [](double x) { return 1.0 + std::log(x); };
  s.log_value = [](double x) { return std::log(x) + std::log(std::log(x)); };
  s.log_deriv = [](double x) { return std::log1p(std::log(x)); };
  s.declared_class = WeightClass::D2;
  s.domain_start = 1.0;
  return Weight::custom(std::move(s));
}

Weight make_exp_sqrt() {
  WeightSpec s;
  s.name = "expsqrt";
  s.value = [](double x) { return std::exp(std::sqrt(x)); };
  s.deriv = [](double x) { return std::exp(std::sqrt(x)) / (2.0 * std::sqrt(x)); };
  s.log_value = [](double x) { return std::sqrt(x); };
  s.log_deriv = [](double x) { return std::sqrt(x) - std::log(2.0 * std::sqrt(x)); };
  s.declared_class = WeightClass::D2;
  s.log_space = true;
  return Weight::custom(std::move(s));
}

Weight make_exp_power(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("exppow: sigma must lie in (0,1) (got " +
                                std::to_string(sigma) + ")");
  WeightSpec s;
  s.name = "exppow:" + std::to_string(sigma);
  s.value = [sigma](double x) { return std::exp(std::pow(x, sigma)); };
  s.deriv = [sigma](double x) {
    return sigma * std::pow(x, sigma - 1.0) * std::exp(std::pow(x, sigma));
  };
  s.log_value = [sigma](double x) { return std::pow(x, sigma); };
  s.log_deriv = [sigma](double x) {
    return std::log(sigma) + (sigma - 1.0) * std::log(x) + std::pow(x, sigma);
  };
  s.declared_class = WeightClass::D2;
  s.log_space = true;
  return Weight::custom(std::move(s));
}

namespace {

// Piecewise-linear weight inscribed in x^p at breakpoints x_n = 2^{p^n}.
// Segment arithmetic runs on L_n = log x_n = p^n log 2, so breakpoints far
// beyond double range stay usable.
struct PwlTable {
  double p;
  std::vector<double> L;  // L[i] = log x_{i+1}

  explicit PwlTable(double p_) : p(p_) {
    double e = p * std::log(2.0);
    while (e < 1e297 && L.size() < 2'000'000) {
      L.push_back(e);
      e *= p;
    }
    if (L.back() < 800.0)
      throw std::invalid_argument("pwl: p too close to 1 for the breakpoint table");
  }
  // 0-based index of the segment [x_{n+1}, x_{n+2}) containing log-x, or -1
  int segment_of_log(double lx) const {
    if (lx < L.front()) return -1;
    const auto it = std::upper_bound(L.begin(), L.end(), lx);
    const int i = static_cast<int>(it - L.begin()) - 1;
    return std::min<int>(i, static_cast<int>(L.size()) - 2);
  }
  // log of the segment slope (x_{n+1}^p - x_n^p)/(x_{n+1} - x_n)
  double log_slope(int n) const {
    const double d = L[n] - L[n + 1];  // < 0
    return (p - 1.0) * L[n + 1] + log1m_exp(p * d) - log1m_exp(d);
  }
  double log_value_at(double lx) const {
    const int n = segment_of_log(lx);
    if (n < 0) throw std::out_of_range("pwl weight: x below first breakpoint");
    const double lxn = L[n];
    if (lx <= lxn) return p * lxn;
    const double log_dx = lx + log1m_exp(lxn - lx);  // log(x - x_n)
    return log_add(p * lxn, log_slope(n) + log_dx);
  }
};

}  // namespace

Weight make_piecewise_linear(double p) {
  if (!(p > 1.0))
    throw std::invalid_argument("pwl: p must be > 1 (got " + std::to_string(p) + ")");
  auto tab = std::make_shared<PwlTable>(p);
  WeightSpec s;
  s.name = "pwl:" + std::to_string(p);
  s.domain_start = std::exp(tab->L.front());
  s.log_value = [tab](double x) { return tab->log_value_at(std::log(x)); };
  s.log_deriv = [tab](double x) {
    const int n = tab->segment_of_log(std::log(x));
    if (n < 0) throw std::out_of_range("pwl weight: x below first breakpoint");
    return tab->log_slope(n);
  };
  s.value = [tab](double x) { return std::exp(tab->log_value_at(std::log(x))); };
  s.deriv = [tab](double x) {
    const int n = tab->segment_of_log(std::log(x));
    if (n < 0) throw std::out_of_range("pwl weight: x below first breakpoint");
    return std::exp(tab->log_slope(n));
  };
  s.declared_class = p < 2.0 ? WeightClass::D2 : WeightClass::Neither;
  s.log_space = true;
  s.hints = [tab](double lo, double hi) {
    std::vector<double> out;
    for (double l : tab->L) {
      if (l > 700.0) break;
      const double x = std::exp(l);
      if (x >= lo && x <= hi) out.push_back(x);
    }
    return out;
  };
  return Weight::custom(std::move(s));
}

Weight parse_weight(std::string_view spec) {
  auto num = [&](std::string_view tok) {
    try {
      size_t pos = 0;
      const std::string t(tok);
      const double v = std::stod(t, &pos);
      if (pos != t.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      throw std::invalid_argument("unknown weight spec `" + std::string(spec) + "`");
    }
  };
  if (spec == "id") return make_power(1.0);
  if (spec == "log") return make_log();
  if (spec == "xlogx") return make_xlogx();
  if (spec == "expsqrt") return make_exp_sqrt();
  if (spec.starts_with("pow:")) return make_power(num(spec.substr(4)));
  if (spec.starts_with("exppow:")) return make_exp_power(num(spec.substr(7)));
  if (spec.starts_with("pwl:")) return make_piecewise_linear(num(spec.substr(4)));
  throw std::invalid_argument("unknown weight spec `" + std::string(spec) + "`");
}

ClassifyResult classify(const Weight& w, double X, int points, double step_tol) {
  if (points < 1000 || X < 1e4)
    throw std::invalid_argument("classify: need >= 1000 grid points and X >= 1e4");
  const double lo = std::max(1.0, w.domain_start() + 1e-6);
  ClassifyResult r;
  r.deriv_nonincreasing = true;
  r.deriv_nondecreasing = true;
  double prev = w.log_deriv(lo);
  for (int i = 1; i <= points; ++i) {
    const double x = lo * std::pow(X / lo, double(i) / points);
    const double d = w.log_deriv(x);
    if (d > prev + 1e-9) r.deriv_nonincreasing = false;
    if (d < prev - 1e-9) r.deriv_nondecreasing = false;
    prev = d;
  }
  const double n = std::floor(X);
  r.final_step_ratio = std::exp(w.log_value(n + 1.0) - w.log_value(n));
  if (r.deriv_nonincreasing)
    r.diagnosis = WeightClass::D1;
  else if (r.deriv_nondecreasing && std::abs(r.final_step_ratio - 1.0) <= step_tol)
    r.diagnosis = WeightClass::D2;
  else
    r.diagnosis = WeightClass::Neither;
  r.matches_declared = r.diagnosis == w.declared_class();
  return r;
}

RatioTrace check_asym(const Weight& w, std::uint64_t N, double tol) {
  if (N < 1000) throw std::invalid_argument("check_asym: N must be >= 1000");
  RatioTrace out;
  const std::uint64_t k0 = w.first_integer();
  std::uint64_t next_cp = 1;
  while (next_cp < k0) next_cp *= 2;
  if (w.log_space()) {
    LogSumExp acc;
    for (std::uint64_t k = k0; k <= N; ++k) {
      acc.add_log(w.log_deriv(static_cast<double>(k)));
      if (k == next_cp || k == N) {
        out.samples.push_back(
            {double(k), std::exp(acc.log_value() - w.log_value(static_cast<double>(k)))});
        while (next_cp <= k) next_cp *= 2;
      }
    }
  } else {
    StableSum acc;
    for (std::uint64_t k = k0; k <= N; ++k) {
      const double d = w.deriv(static_cast<double>(k));
      if (!std::isfinite(d))
        throw std::range_error("check_asym: overflow accumulating weight " + w.name() +
                               " without log-space evaluators");
      acc.add(d);
      if (k == next_cp || k == N) {
        const double v = w.value(static_cast<double>(k));
        if (!std::isfinite(v))
          throw std::range_error("check_asym: psi overflow for weight " + w.name());
        out.samples.push_back({double(k), acc.value() / v});
        while (next_cp <= k) next_cp *= 2;
      }
    }
  }
  out.final_value = out.samples.back().second;
  out.converged = std::abs(out.final_value - 1.0) <= tol;
  return out;
}

RatioTrace log_derivative_trace(const Weight& w, double X, int points) {
  if (X < 100) throw std::invalid_argument("log_derivative_trace: X must be >= 100");
  RatioTrace out;
  const double lo = std::max(1.0, w.domain_start() + 1e-6);
  double sup_tail = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double x = lo * std::pow(X / lo, double(i) / points);
    const double r = std::exp(w.log_deriv(x) - w.log_value(x));
    out.samples.push_back({x, r});
    if (x >= X / 2) sup_tail = std::max(sup_tail, r);
  }
  out.final_value = out.samples.back().second;
  out.tail_sup = sup_tail;
  out.converged = out.final_value <= 1e-2;
  return out;
}

}  // namespace psidensity
