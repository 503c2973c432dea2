#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "psidensity/stable_sum.hpp"

using namespace psidensity;

TEST_CASE("compensated sum keeps sub-ulp contributions") {
  StableSum s;
  s.add(1.0);
  const double tiny = 1e-16;
  for (int i = 0; i < 100000; ++i) s.add(tiny);
  CHECK(s.value() == doctest::Approx(1.0 + 1e-11).epsilon(1e-12));
}

TEST_CASE("compensated sum is deterministic") {
  std::mt19937 rng(42);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = std::ldexp(double(rng()), -int(rng() % 40));
  StableSum a, b;
  for (double x : xs) a.add(x);
  for (double x : xs) b.add(x);
  CHECK(a.value() == b.value());
}

TEST_CASE("log_add matches direct addition") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_add(ninf, 1.5) == 1.5);
  CHECK(log_add(1.5, ninf) == 1.5);
  CHECK(log_add(1000.0, 0.0) == doctest::Approx(1000.0));
}

TEST_CASE("log1m_exp stable at both ends") {
  CHECK(log1m_exp(-1e-10) == doctest::Approx(std::log(1e-10)).epsilon(1e-6));
  CHECK(log1m_exp(-50.0) == doctest::Approx(-std::exp(-50.0)).epsilon(1e-6));
}

TEST_CASE("streaming log-sum-exp matches log of direct sum") {
  std::mt19937 rng(7);
  LogSumExp acc;
  double direct = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const double a = double(rng() % 1000) / 100.0 - 5.0;
    acc.add_log(a);
    direct += std::exp(a);
  }
  CHECK(acc.log_value() == doctest::Approx(std::log(direct)).epsilon(1e-12));
}

TEST_CASE("log-sum-exp survives huge exponents") {
  LogSumExp acc;
  acc.add_log(10000.0);
  acc.add_log(10001.0);
  CHECK(acc.log_value() == doctest::Approx(10001.0 + std::log1p(std::exp(-1.0))));
  CHECK(LogSumExp{}.empty());
}
