// Independent oracles used only by the test suites. These deliberately avoid
// the library's own summation and sieve paths.
#pragma once

#include <quadmath.h>

#include <cstdint>
#include <vector>

#include "psidensity/integer_set.hpp"
#include "psidensity/weight.hpp"

namespace oracles {

// plain vector<bool> Eratosthenes, independent of the bit-packed library sieve
inline std::vector<bool> reference_sieve(std::uint64_t n) {
  std::vector<bool> is_prime(n + 1, true);
  is_prime[0] = false;
  if (n >= 1) is_prime[1] = false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (is_prime[p])
      for (std::uint64_t m = p * p; m <= n; m += p) is_prime[m] = false;
  return is_prime;
}

// Hurwitz zeta(s, q) by Euler-Maclaurin in __float128: partial sum to the
// cut M, integral tail, and Bernoulli corrections through B8. The first
// omitted term is below 1e-33 relative for s in (1, 4], M = 1e5, so the
// value is correct to quad precision (~33 digits); callers compare in double.
inline double hurwitz_zeta(double s_, double q_) {
  const __float128 s = s_, q = q_;
  const int M = 100000;
  __float128 sum = 0;
  for (int n = M - 1; n >= 0; --n) sum += powq(n + q, -s);
  const __float128 mq = M + q;
  __float128 tail = powq(mq, 1 - s) / (s - 1);
  tail += powq(mq, -s) / 2;
  tail += s * powq(mq, -s - 1) / 12;
  tail -= s * (s + 1) * (s + 2) * powq(mq, -s - 3) / 720;
  tail += s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * powq(mq, -s - 5) / 30240;
  tail -= s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * (s + 5) * (s + 6) *
          powq(mq, -s - 7) / 1209600;
  return static_cast<double>(sum + tail);
}

inline double zeta(double s) { return hurwitz_zeta(s, 1.0); }

// exact Dirichlet series of the progression {ak + b : k >= 1} at exponent p
inline double ap_dirichlet(std::uint64_t a, std::uint64_t b, double p) {
  const double aa = static_cast<double>(a), bb = static_cast<double>(b);
  return std::pow(aa, -p) * hurwitz_zeta(p, 1.0 + bb / aa);
}

// closed-form Abel value of the progression {ak + b : k >= 1}:
// (1-x) x^{a+b} / (1 - x^a)
inline double ap_abel(std::uint64_t a, std::uint64_t b, double x) {
  const __float128 xq = x;
  const __float128 num = (1 - xq) * powq(xq, static_cast<__float128>(a + b));
  const __float128 den = 1 - powq(xq, static_cast<__float128>(a));
  return static_cast<double>(num / den);
}

// naive double-loop weighted partial sums: for each checkpoint the inner sum
// is recomputed from scratch with plain double accumulation
struct BruteRatios {
  std::vector<std::uint64_t> ns;
  std::vector<double> ratios;
};

inline BruteRatios brute_force_ratios(const psidensity::IntegerSet& A,
                                      const psidensity::Weight& w,
                                      const std::vector<std::uint64_t>& checkpoints) {
  BruteRatios out;
  const std::uint64_t k0 = w.first_integer();
  for (std::uint64_t n : checkpoints) {
    if (n < k0) continue;
    double num = 0, den = 0;
    if (w.log_space()) {
      // direct evaluation in linear space; valid while exp stays finite
      for (std::uint64_t k = k0; k <= n; ++k) {
        const double d = std::exp(w.log_deriv(static_cast<double>(k)));
        den += d;
        if (A.contains(k)) num += d;
      }
    } else {
      for (std::uint64_t k = k0; k <= n; ++k) {
        const double d = w.deriv(static_cast<double>(k));
        den += d;
        if (A.contains(k)) num += d;
      }
    }
    out.ns.push_back(n);
    out.ratios.push_back(num / den);
  }
  return out;
}

}  // namespace oracles
