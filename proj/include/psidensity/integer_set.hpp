#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace psidensity {

// Interval generator for block sets: maps index k = 1, 2, ... to the
// half-open interval [l_k, r_k), or nullopt when the set has no further
// blocks. Intervals must satisfy 1 <= l_k < r_k <= l_{k+1}; violations are
// reported the first time the offending index is actually visited.
using BlockGen =
    std::function<std::optional<std::pair<std::uint64_t, std::uint64_t>>(std::uint64_t)>;

// Immutable lazy subset of {1, 2, 3, ...}. Copies share the representation;
// all queries are pure, so values can be used from many threads at once.
class IntegerSet {
public:
  // membership of n (n = 0 is never a member)
  bool contains(std::uint64_t n) const;
  // |A ∩ [1, n]|
  std::uint64_t count_up_to(std::uint64_t n) const;
  // smallest member > after, or nullopt if none below the query limit
  std::optional<std::uint64_t> next_member(std::uint64_t after) const;
  // largest n that may be queried (UINT64_MAX unless sieve-backed)
  std::uint64_t query_limit() const;
  const std::string& spec() const;

  // first `count` members, ascending
  std::vector<std::uint64_t> members(std::uint64_t count) const;

  static IntegerSet ap(std::uint64_t a, std::uint64_t b);
  static IntegerSet primes(std::uint64_t limit);
  static IntegerSet block(BlockGen gen, std::string name);
  static IntegerSet block_pow2_alt();
  // balanced random block set: one member octave per pair of octave slots,
  // phase drawn per pair from mt19937(seed)
  static IntegerSet block_balanced_random(std::uint32_t seed);
  static IntegerSet finite(std::vector<std::uint64_t> elements);
  static IntegerSet predicate(std::function<bool(std::uint64_t)> pred, std::string name);
  static IntegerSet complement(IntegerSet a);
  static IntegerSet unite(std::vector<IntegerSet> operands);
  static IntegerSet intersect(std::vector<IntegerSet> operands);
  static IntegerSet naturals() { return ap(1, 0); }
  static IntegerSet evens() { return ap(2, 0); }
  // a with the listed elements toggled (members removed, non-members added)
  static IntegerSet toggle(IntegerSet a, std::vector<std::uint64_t> elements);

  struct Impl;
  explicit IntegerSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  const std::shared_ptr<const Impl>& impl() const { return impl_; }

private:
  std::shared_ptr<const Impl> impl_;
};

// Parses a CLI set specification:
//   ap:a,b | primes:limit | evens | odds | block:pow2-alt | naturals
//   union(s1; s2; ...) | inter(s1; s2; ...) | compl(s)
// Throws std::invalid_argument naming the offending token.
IntegerSet parse_set(std::string_view spec);

}  // namespace psidensity
