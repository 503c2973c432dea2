#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "psidensity/stable_sum.hpp"
#include "psidensity/weight.hpp"

using namespace psidensity;

namespace {

std::vector<Weight> catalog() {
  return {make_power(0.5), make_power(1.0), make_power(2.0), make_power(3.0),
          make_log(),      make_xlogx(),    make_exp_sqrt(), make_exp_power(0.5),
          make_piecewise_linear(1.5)};
}

Weight exp_weight() {
  // e^x: strictly increasing and convex but psi(n+1)/psi(n) = e, so it sits
  // in neither class
  WeightSpec s;
  s.name = "exp";
  s.value = [](double x) { return std::exp(x); };
  s.deriv = [](double x) { return std::exp(x); };
  s.log_value = [](double x) { return x; };
  s.log_deriv = [](double x) { return x; };
  s.log_space = true;
  return Weight::custom(std::move(s));
}

}  // namespace

TEST_CASE("power weights: closed-form values") {
  const auto id = make_power(1.0);
  CHECK(id.value(5.0) == 5.0);
  CHECK(id.deriv(5.0) == 1.0);
  const auto sq = make_power(0.5);
  CHECK(sq.value(4.0) == 2.0);
  CHECK(sq.deriv(4.0) == 0.25);
  CHECK_THROWS_AS(make_power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_power(-2.0), std::invalid_argument);
}

TEST_CASE("catalog closed forms at spot points") {
  // log-derivative of log(1+x) is 1/((1+x)log(1+x))
  const auto lg = make_log();
  const double x = 1e6;
  CHECK(std::exp(lg.log_deriv(x) - lg.log_value(x)) ==
        doctest::Approx(1.0 / ((1.0 + x) * std::log1p(x))));
  CHECK(std::exp(lg.log_deriv(x) - lg.log_value(x)) < 1e-6);

  // xlogx: psi'(2n)/psi(n) = (log(2n)+1)/(n log n) heads to 0
  const auto xl = make_xlogx();
  const double n = 1e4;
  const double r = xl.deriv(2 * n) / xl.value(n);
  CHECK(r == doctest::Approx((std::log(2 * n) + 1) / (n * std::log(n))));
  CHECK(r < 2e-3);
  CHECK(xl.deriv(1.0) == 1.0);

  // exppow(0.5): log psi'(2n) - log psi(n) is big at n = 1e4
  const auto ep = make_exp_power(0.5);
  const double lr = ep.log_deriv(2 * n) - ep.log_value(n);
  const double expect = std::log(0.5) - 0.5 * std::log(2 * n) + std::sqrt(2 * n) - std::sqrt(n);
  CHECK(lr == doctest::Approx(expect).epsilon(1e-12));
  CHECK(lr > 30.0);

  CHECK_THROWS_AS(make_exp_power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_exp_power(1.0), std::invalid_argument);
}

TEST_CASE("piecewise-linear breakpoint ratios") {
  // exact ratio psi(x_n + 1)/psi(x_n) = 1 + s_n / x_n^p, evaluated directly
  auto exact_ratio = [](double p, int n) {
    const double xn = std::pow(2.0, std::pow(p, n));
    const double xn1 = std::pow(2.0, std::pow(p, n + 1));
    const double slope = (std::pow(xn1, p) - std::pow(xn, p)) / (xn1 - xn);
    return 1.0 + slope / std::pow(xn, p);
  };
  const auto w2 = make_piecewise_linear(2.0);
  const double x4 = std::pow(2.0, 16.0);
  const double got = std::exp(w2.log_value(x4 + 1.0) - w2.log_value(x4));
  CHECK(got == doctest::Approx(exact_ratio(2.0, 4)).epsilon(1e-12));
  CHECK(std::abs(got - 2.0) < 1e-3);

  const auto w15 = make_piecewise_linear(1.5);
  const double x6 = std::pow(2.0, std::pow(1.5, 6.0));
  const double r15 = std::exp(w15.log_value(x6 + 1.0) - w15.log_value(x6));
  CHECK(std::abs(r15 - 1.0) < 1e-2);

  const auto w3 = make_piecewise_linear(3.0);
  const double x2 = std::pow(2.0, 9.0);
  const double r3 = std::exp(w3.log_value(x2 + 1.0) - w3.log_value(x2));
  CHECK(r3 > 10.0);

  CHECK_THROWS_AS(make_piecewise_linear(1.0), std::invalid_argument);
  CHECK_THROWS_AS(w2.value(3.0), std::out_of_range);  // below x_1 = 4
}

TEST_CASE("bounded weights are rejected at construction") {
  WeightSpec s;
  s.name = "bounded";
  s.value = [](double x) { return 1.0 / (std::exp(1.0) - 1.0) - std::exp(-x); };
  s.deriv = [](double x) { return std::exp(-x); };
  CHECK_THROWS_WITH_AS(Weight::custom(std::move(s)), doctest::Contains("bounded"),
                       std::invalid_argument);

  WeightSpec dec;
  dec.name = "decreasing";
  dec.value = [](double x) { return 1.0 / x; };
  dec.deriv = [](double x) { return -1.0 / (x * x); };
  CHECK_THROWS_AS(Weight::custom(std::move(dec)), std::invalid_argument);
}

TEST_CASE("classification: concavity evidence plus step ratio") {
  for (double q : {0.3, 0.7, 1.0})
    CHECK(classify(make_power(q)).diagnosis == WeightClass::D1);
  for (double q : {1.5, 2.0, 3.0})
    CHECK(classify(make_power(q)).diagnosis == WeightClass::D2);
  CHECK(classify(make_log()).diagnosis == WeightClass::D1);
  CHECK(classify(make_xlogx()).diagnosis == WeightClass::D2);

  const auto e = classify(exp_weight());
  CHECK(e.diagnosis == WeightClass::Neither);
  CHECK(e.final_step_ratio == doctest::Approx(std::exp(1.0)));

  CHECK_THROWS_AS(classify(make_log(), 100.0), std::invalid_argument);
}

TEST_CASE("check_asym: identity weight is exact") {
  const auto t = check_asym(make_power(1.0), 4096);
  for (const auto& [n, r] : t.samples) CHECK(r == 1.0);
  CHECK(t.converged);
}

TEST_CASE("check_asym: log weight vs harmonic oracle") {
  // oracle: direct sum of 1/(1+k) against log(1+n); the deviation from 1 is
  // (1-gamma)/log n, still 0.031 at n = 2^20
  double h = 0.0;
  const std::uint64_t N = 1 << 20;
  for (std::uint64_t k = 1; k <= N; ++k) h += 1.0 / (1.0 + double(k));
  const double want = h / std::log1p(double(N));
  const auto t = check_asym(make_log(), N);
  CHECK(t.final_value == doctest::Approx(want).epsilon(1e-9));
  CHECK(std::abs(t.final_value - 1.0) < 0.04);
}

TEST_CASE("check_asym: quadratic weight has ratio 1 + 1/n") {
  const auto t = check_asym(make_power(2.0), 10000);
  // sum of 2k up to n is n(n+1), so the ratio is exactly 1 + 1/n
  CHECK(t.final_value == doctest::Approx(1.0 + 1.0 / 10000.0).epsilon(1e-10));
  CHECK(std::abs(t.final_value - 1.0) < 2e-4);
}

TEST_CASE("check_asym converges for every catalog weight in D1/D2") {
  for (const auto& w : catalog()) {
    if (w.declared_class() == WeightClass::Neither) continue;
    // log converges at speed (1-gamma)/log n and only dips under 0.02
    // around n = 2^31; everything else settles by 2^20
    const std::uint64_t n = w.name() == "log" ? (std::uint64_t{1} << 31)
                                              : (std::uint64_t{1} << 20);
    const auto t = check_asym(w, n, 0.02);
    INFO(w.name());
    CHECK(t.converged);
  }
  CHECK_THROWS_AS(check_asym(make_power(1.0), 10), std::invalid_argument);
}

TEST_CASE("log_derivative_trace tail suprema") {
  const auto p2 = log_derivative_trace(make_power(2.0), 1e4);
  CHECK(p2.tail_sup == doctest::Approx(4e-4).epsilon(0.1));  // 2/x at x ~ 5e3

  const auto es = log_derivative_trace(make_exp_sqrt(), 1e6);
  CHECK(es.final_value == doctest::Approx(1.0 / (2.0 * std::sqrt(1e6))).epsilon(1e-6));
  CHECK(es.converged);

  const auto ex = log_derivative_trace(exp_weight(), 1e4);
  for (const auto& [x, r] : ex.samples) CHECK(r == doctest::Approx(1.0));
  CHECK(!ex.converged);
}

TEST_CASE("finite differences confirm the derivative evaluators") {
  std::mt19937 rng(2024);
  for (const auto& w : catalog()) {
    const auto hints = w.refinement_hints(1.0, 1e7);
    const double lo = std::max(1.0, w.domain_start() + 1e-3);
    int checked = 0;
    for (int i = 0; checked < 1000 && i < 5000; ++i) {
      const double u = double(rng()) / 4294967296.0;
      double x = lo * std::pow(1e6 / lo, u);
      if (w.log_space() && w.log_value(x) > 300.0) continue;  // keep psi representable
      const double h = 1e-6 * std::max(1.0, x);
      bool near_break = false;
      for (double b : hints)
        if (std::abs(x - b) < 2 * h || std::abs(x + h - b) < 2 * h) near_break = true;
      if (near_break) continue;
      const double fd = (w.value(x + h) - w.value(x)) / h;
      const double d = w.deriv(x);
      INFO(w.name() << " at x=" << x);
      CHECK(fd == doctest::Approx(d).epsilon(1e-4));
      ++checked;
    }
    CHECK(checked == 1000);
  }
}

TEST_CASE("log evaluators agree with direct evaluation where finite") {
  for (const auto& w : catalog()) {
    const double lo = std::max(1.0, w.domain_start() + 1e-3);
    for (int i = 0; i <= 200; ++i) {
      const double x = lo * std::pow(1e5 / lo, i / 200.0);
      const double lv = w.log_value(x);
      if (lv > 700.0) break;
      CHECK(std::exp(lv) == doctest::Approx(w.value(x)).epsilon(1e-10));
      const double ld = w.log_deriv(x);
      if (std::abs(ld) < 700.0)
        CHECK(std::exp(ld) == doctest::Approx(w.deriv(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("weight spec parsing") {
  CHECK(parse_weight("id").name() == "id");
  CHECK(parse_weight("pow:2").value(3.0) == 9.0);
  CHECK(parse_weight("log").declared_class() == WeightClass::D1);
  CHECK(parse_weight("xlogx").domain_start() == 1.0);
  CHECK(parse_weight("expsqrt").log_space());
  CHECK(parse_weight("exppow:0.5").log_space());
  CHECK(parse_weight("pwl:2").domain_start() == doctest::Approx(4.0));
  CHECK_THROWS_WITH_AS(parse_weight("nope"), doctest::Contains("nope"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_weight("pow:x"), std::invalid_argument);
}
