#include <doctest.h>

#include <stdexcept>

#include "oracles.hpp"
#include "psidensity/integer_set.hpp"

using namespace psidensity;

TEST_CASE("arithmetic progressions") {
  CHECK(IntegerSet::ap(1, 0).count_up_to(10) == 10);
  CHECK(IntegerSet::ap(2, 0).count_up_to(10) == 5);

  // ap(3,1): brute force over 1..10 gives {4, 7, 10}
  const auto a31 = IntegerSet::ap(3, 1);
  std::uint64_t brute = 0;
  for (std::uint64_t k = 1; k <= 10; ++k) brute += (k >= 4 && (k - 1) % 3 == 0);
  CHECK(brute == 3);
  CHECK(a31.count_up_to(10) == brute);
  CHECK(a31.contains(4));
  CHECK(!a31.contains(1));  // elements start at a+b
  CHECK(a31.members(3) == std::vector<std::uint64_t>{4, 7, 10});

  CHECK_THROWS_AS(IntegerSet::ap(0, 1), std::invalid_argument);
}

TEST_CASE("primes: sieve vs independent reference") {
  const auto ref = oracles::reference_sieve(30);
  std::uint64_t count30 = 0;
  for (int i = 0; i <= 30; ++i) count30 += ref[i];
  CHECK(count30 == 10);

  const auto P = IntegerSet::primes(30);
  CHECK(P.count_up_to(30) == 10);
  for (std::uint64_t n = 1; n <= 30; ++n) CHECK(P.contains(n) == ref[n]);

  CHECK(IntegerSet::primes(2).count_up_to(2) == 1);
  CHECK_THROWS_AS(P.contains(31), std::out_of_range);
  CHECK_THROWS_AS(P.count_up_to(31), std::out_of_range);
  CHECK_THROWS_AS(IntegerSet::primes(1), std::invalid_argument);
}

TEST_CASE("primes at 1e6 match the reference count") {
  const auto ref = oracles::reference_sieve(1000000);
  std::uint64_t want = 0;
  for (std::uint64_t i = 0; i <= 1000000; ++i) want += ref[i];
  CHECK(want == 78498);
  CHECK(IntegerSet::primes(1000000).count_up_to(1000000) == want);
}

TEST_CASE("pow2-alt block set") {
  const auto B = IntegerSet::block_pow2_alt();
  CHECK(B.count_up_to(4) == 2);  // members 2, 3
  CHECK(B.contains(2));
  CHECK(B.contains(3));
  CHECK(!B.contains(4));
  // count at 2^{2K} is 2(4^K - 1)/3 by summing the geometric block widths
  for (std::uint64_t K : {1, 3, 6, 10}) {
    const std::uint64_t n = std::uint64_t{1} << (2 * K);
    const std::uint64_t want = 2 * ((std::uint64_t{1} << (2 * K)) - 1) / 3;
    CHECK(B.count_up_to(n) == want);
  }
}

TEST_CASE("empty and invalid block generators") {
  const auto empty = IntegerSet::block([](std::uint64_t) { return std::nullopt; }, "block:none");
  CHECK(empty.count_up_to(1000) == 0);
  CHECK(!empty.next_member(0).has_value());

  // overlap is reported when the offending index is first visited
  const auto bad = IntegerSet::block(
      [](std::uint64_t k) -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
        if (k == 1) return std::make_pair(std::uint64_t{10}, std::uint64_t{20});
        if (k == 2) return std::make_pair(std::uint64_t{15}, std::uint64_t{25});
        return std::nullopt;
      },
      "block:bad");
  CHECK(bad.contains(12));  // only the first interval visited so far
  CHECK_THROWS_AS(bad.contains(30), std::invalid_argument);
}

TEST_CASE("boolean combinations") {
  const auto evens = IntegerSet::evens();
  const auto odds = IntegerSet::complement(evens);
  CHECK(odds.contains(3));
  CHECK(!odds.contains(4));

  const auto all = IntegerSet::unite({evens, odds});
  for (std::uint64_t n : {1, 2, 17, 100}) CHECK(all.count_up_to(n) == n);

  const auto sixes = IntegerSet::intersect({IntegerSet::ap(2, 0), IntegerSet::ap(3, 0)});
  std::uint64_t brute = 0;
  for (std::uint64_t k = 1; k <= 20; ++k) brute += (k % 6 == 0);
  CHECK(sixes.count_up_to(20) == brute);
  CHECK(sixes.members(3) == std::vector<std::uint64_t>{6, 12, 18});

  CHECK_THROWS_AS(IntegerSet::unite({evens}), std::invalid_argument);
  CHECK_THROWS_AS(IntegerSet::intersect({evens}), std::invalid_argument);
}

TEST_CASE("count/membership coherence up to 1e5") {
  const auto sets = {IntegerSet::ap(3, 1), IntegerSet::block_pow2_alt(),
                     IntegerSet::complement(IntegerSet::complement(IntegerSet::ap(3, 1))),
                     IntegerSet::block_balanced_random(5),
                     IntegerSet::toggle(IntegerSet::ap(2, 0), {10, 11, 12, 40000})};
  for (const auto& s : sets) {
    std::uint64_t running = 0, prev = 0;
    for (std::uint64_t n = 1; n <= 100000; ++n) {
      running += s.contains(n);
      const auto c = s.count_up_to(n);
      CHECK(c == running);
      CHECK(c >= prev);
      CHECK(c <= n);
      prev = c;
    }
  }
}

TEST_CASE("double complement agrees with the base set") {
  const auto a = IntegerSet::block_pow2_alt();
  const auto cc = IntegerSet::complement(IntegerSet::complement(a));
  for (std::uint64_t n = 1; n <= 100000; ++n) CHECK(a.contains(n) == cc.contains(n));
}

TEST_CASE("set spec parsing") {
  CHECK(parse_set("evens").count_up_to(10) == 5);
  CHECK(parse_set("odds").contains(3));
  CHECK(parse_set("ap:3,1").contains(7));
  CHECK(parse_set("primes:100").count_up_to(100) == 25);
  CHECK(parse_set("block:pow2-alt").contains(2));
  CHECK(parse_set("union(ap:2,0; ap:3,0)").contains(9));
  CHECK(parse_set("inter(ap:2,0; ap:3,0)").members(1) == std::vector<std::uint64_t>{6});
  CHECK(parse_set("compl(ap:2,0)").contains(1));
  CHECK(parse_set("union(ap:2,0; compl(ap:2,0))").count_up_to(50) == 50);

  CHECK_THROWS_WITH_AS(parse_set("ap:0,1"), doctest::Contains("ap:0,1"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_set("frobnicate"), std::invalid_argument);
  CHECK_THROWS_AS(parse_set("compl(ap:2,0; ap:3,0)"), std::invalid_argument);
}

TEST_CASE("toggle flips membership both ways") {
  const auto t = IntegerSet::toggle(IntegerSet::evens(), {2, 3});
  CHECK(!t.contains(2));
  CHECK(t.contains(3));
  CHECK(t.contains(4));
  CHECK(t.count_up_to(4) == 2);  // {3, 4}
}
