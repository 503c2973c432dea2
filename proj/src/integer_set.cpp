#include "psidensity/integer_set.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <bit>

namespace psidensity {

namespace {
constexpr std::uint64_t kNoLimit = std::numeric_limits<std::uint64_t>::max();
}

struct IntegerSet::Impl {
  virtual ~Impl() = default;
  virtual bool contains(std::uint64_t n) const = 0;
  virtual std::uint64_t count_up_to(std::uint64_t n) const {
    std::uint64_t c = 0;
    for (std::uint64_t k = 1; k <= n; ++k) c += contains(k);
    return c;
  }
  virtual std::optional<std::uint64_t> next_member(std::uint64_t after) const {
    const std::uint64_t lim = query_limit();
    for (std::uint64_t k = after + 1; k <= lim; ++k) {
      if (contains(k)) return k;
      if (k == kNoLimit) break;
    }
    return std::nullopt;
  }
  virtual std::uint64_t query_limit() const { return kNoLimit; }
  std::string spec;
};

namespace {

struct ApImpl final : IntegerSet::Impl {
  std::uint64_t a, b;
  // members a+b, 2a+b, 3a+b, ...
  bool contains(std::uint64_t n) const override {
    return n >= a + b && (n - b) % a == 0;
  }
  std::uint64_t count_up_to(std::uint64_t n) const override {
    if (n < a + b) return 0;
    return (n - b) / a;
  }
  std::optional<std::uint64_t> next_member(std::uint64_t after) const override {
    if (after < a + b) return a + b;
    return b + a * ((after - b) / a + 1);
  }
};

struct PrimesImpl final : IntegerSet::Impl {
  std::uint64_t limit;
  std::vector<std::uint64_t> bits;  // bit n set <=> n prime, n <= limit

  explicit PrimesImpl(std::uint64_t lim) : limit(lim) {
    bits.assign(limit / 64 + 1, ~0ULL);
    clear_bit(0);
    clear_bit(1);
    for (std::uint64_t p = 2; p * p <= limit; ++p)
      if (test_bit(p))
        for (std::uint64_t m = p * p; m <= limit; m += p) clear_bit(m);
  }
  bool test_bit(std::uint64_t n) const { return (bits[n >> 6] >> (n & 63)) & 1; }
  void clear_bit(std::uint64_t n) { bits[n >> 6] &= ~(1ULL << (n & 63)); }

  bool contains(std::uint64_t n) const override {
    if (n > limit)
      throw std::out_of_range("primes set: query " + std::to_string(n) +
                              " beyond sieve limit " + std::to_string(limit) +
                              "; rebuild with a larger limit");
    return test_bit(n);
  }
  std::uint64_t count_up_to(std::uint64_t n) const override {
    if (n > limit)
      throw std::out_of_range("primes set: count_up_to(" + std::to_string(n) +
                              ") beyond sieve limit " + std::to_string(limit));
    std::uint64_t c = 0, w = n >> 6;
    for (std::uint64_t i = 0; i < w; ++i) c += std::popcount(bits[i]);
    const std::uint64_t r = (n & 63) + 1;  // keep bits 0..n of word w
    const std::uint64_t mask = r == 64 ? ~0ULL : ((1ULL << r) - 1);
    c += std::popcount(bits[w] & mask);
    return c;
  }
  std::uint64_t query_limit() const override { return limit; }
};

struct BlockImpl final : IntegerSet::Impl {
  BlockGen gen;
  // cache of validated intervals, extended on demand
  mutable std::vector<std::pair<std::uint64_t, std::uint64_t>> cache;
  mutable bool exhausted = false;
  mutable std::mutex mu;

  // ensure the cache covers positions <= n (or the generator is exhausted)
  void extend(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(mu);
    while (!exhausted && (cache.empty() || cache.back().second <= n)) {
      auto iv = gen(cache.size() + 1);
      if (!iv) {
        exhausted = true;
        break;
      }
      auto [l, r] = *iv;
      if (l < 1 || r <= l)
        throw std::invalid_argument("block set: invalid interval at index " +
                                    std::to_string(cache.size() + 1));
      if (!cache.empty() && l < cache.back().second)
        throw std::invalid_argument("block set: intervals overlap or decrease at index " +
                                    std::to_string(cache.size() + 1));
      cache.push_back({l, r});
    }
  }
  bool contains(std::uint64_t n) const override {
    if (n == 0) return false;
    extend(n);
    auto it = std::upper_bound(cache.begin(), cache.end(), n,
                               [](std::uint64_t v, const auto& iv) { return v < iv.first; });
    if (it == cache.begin()) return false;
    --it;
    return n < it->second;
  }
  std::uint64_t count_up_to(std::uint64_t n) const override {
    if (n == 0) return 0;
    extend(n);
    std::uint64_t c = 0;
    for (const auto& [l, r] : cache) {
      if (l > n) break;
      c += std::min(r - 1, n) - l + 1;
    }
    return c;
  }
  std::optional<std::uint64_t> next_member(std::uint64_t after) const override {
    extend(after + 1);
    for (const auto& [l, r] : cache) {
      if (r <= after + 1) continue;
      return std::max(l, after + 1);
    }
    if (exhausted) return std::nullopt;
    // next interval exists but starts beyond the cache; extend once more
    extend(cache.empty() ? after + 1 : cache.back().second);
    for (const auto& [l, r] : cache)
      if (r > after + 1) return std::max(l, after + 1);
    return std::nullopt;
  }
};

struct FiniteImpl final : IntegerSet::Impl {
  std::vector<std::uint64_t> elems;  // sorted, unique
  bool contains(std::uint64_t n) const override {
    return std::binary_search(elems.begin(), elems.end(), n);
  }
  std::uint64_t count_up_to(std::uint64_t n) const override {
    return std::upper_bound(elems.begin(), elems.end(), n) - elems.begin();
  }
  std::optional<std::uint64_t> next_member(std::uint64_t after) const override {
    auto it = std::upper_bound(elems.begin(), elems.end(), after);
    if (it == elems.end()) return std::nullopt;
    return *it;
  }
};

struct PredImpl final : IntegerSet::Impl {
  std::function<bool(std::uint64_t)> pred;
  bool contains(std::uint64_t n) const override { return n >= 1 && pred(n); }
};

struct ComplImpl final : IntegerSet::Impl {
  std::shared_ptr<const IntegerSet::Impl> inner;
  bool contains(std::uint64_t n) const override { return n >= 1 && !inner->contains(n); }
  std::uint64_t count_up_to(std::uint64_t n) const override {
    return n - inner->count_up_to(n);
  }
  std::uint64_t query_limit() const override { return inner->query_limit(); }
};

struct ComboImpl final : IntegerSet::Impl {
  std::vector<std::shared_ptr<const IntegerSet::Impl>> ops;
  bool is_union = true;
  bool contains(std::uint64_t n) const override {
    if (n == 0) return false;
    for (const auto& s : ops) {
      const bool m = s->contains(n);
      if (is_union && m) return true;
      if (!is_union && !m) return false;
    }
    return !is_union;
  }
  std::uint64_t query_limit() const override {
    std::uint64_t lim = kNoLimit;
    for (const auto& s : ops) lim = std::min(lim, s->query_limit());
    return lim;
  }
};

struct ToggleImpl final : IntegerSet::Impl {
  std::shared_ptr<const IntegerSet::Impl> inner;
  std::vector<std::uint64_t> flips;  // sorted, unique
  bool contains(std::uint64_t n) const override {
    const bool base = inner->contains(n);
    return std::binary_search(flips.begin(), flips.end(), n) ? !base : base;
  }
  std::uint64_t count_up_to(std::uint64_t n) const override {
    std::uint64_t c = inner->count_up_to(n);
    for (std::uint64_t f : flips) {
      if (f > n) break;
      c += inner->contains(f) ? -1 : +1;
    }
    return c;
  }
  std::uint64_t query_limit() const override { return inner->query_limit(); }
};

}  // namespace

bool IntegerSet::contains(std::uint64_t n) const { return impl_->contains(n); }
std::uint64_t IntegerSet::count_up_to(std::uint64_t n) const { return impl_->count_up_to(n); }
std::optional<std::uint64_t> IntegerSet::next_member(std::uint64_t after) const {
  return impl_->next_member(after);
}
std::uint64_t IntegerSet::query_limit() const { return impl_->query_limit(); }
const std::string& IntegerSet::spec() const { return impl_->spec; }

std::vector<std::uint64_t> IntegerSet::members(std::uint64_t count) const {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  std::uint64_t cur = 0;
  while (out.size() < count) {
    auto nxt = impl_->next_member(cur);
    if (!nxt) break;
    out.push_back(*nxt);
    cur = *nxt;
  }
  return out;
}

IntegerSet IntegerSet::ap(std::uint64_t a, std::uint64_t b) {
  if (a == 0)
    throw std::invalid_argument("ap: modulus a must be >= 1 (got ap:" + std::to_string(a) +
                                "," + std::to_string(b) + ")");
  auto impl = std::make_shared<ApImpl>();
  impl->a = a;
  impl->b = b;
  impl->spec = "ap:" + std::to_string(a) + "," + std::to_string(b);
  return IntegerSet(std::move(impl));
}

IntegerSet IntegerSet::primes(std::uint64_t limit) {
  if (limit < 2) throw std::invalid_argument("primes: limit must be >= 2");
  auto impl = std::make_shared<PrimesImpl>(limit);
  impl->spec = "primes:" + std::to_string(limit);
  return IntegerSet(std::move(impl));
}

IntegerSet IntegerSet::block(BlockGen gen, std::string name) {
  auto impl = std::make_shared<BlockImpl>();
  impl->gen = std::move(gen);
  impl->spec = std::move(name);
  return IntegerSet(std::move(impl));
}

IntegerSet IntegerSet::block_pow2_alt() {
  // member octaves [2^{2k-1}, 2^{2k}), k = 1, 2, ...
  return block(
      [](std::uint64_t k) -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
        if (2 * k >= 63) return std::nullopt;
        return std::make_pair(std::uint64_t{1} << (2 * k - 1), std::uint64_t{1} << (2 * k));
      },
      "block:pow2-alt");
}

IntegerSet IntegerSet::block_balanced_random(std::uint32_t seed) {
  // Octave slots are consumed in pairs; each pair contributes exactly one
  // member octave at a phase drawn from mt19937. Phases are materialized
  // up front so queries stay pure.
  std::mt19937 rng(seed);
  auto phases = std::make_shared<std::vector<int>>();
  for (int i = 0; i < 31; ++i) phases->push_back(static_cast<int>(rng() & 1));
  return block(
      [phases](std::uint64_t k) -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
        if (k > phases->size()) return std::nullopt;
        const std::uint64_t e = 1 + 2 * (k - 1) + static_cast<std::uint64_t>((*phases)[k - 1]);
        if (e + 1 >= 63) return std::nullopt;
        return std::make_pair(std::uint64_t{1} << e, std::uint64_t{1} << (e + 1));
      },
      "block:balanced:" + std::to_string(seed));
}

IntegerSet IntegerSet::finite(std::vector<std::uint64_t> elements) {
  auto impl = std::make_shared<FiniteImpl>();
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!elements.empty() && elements.front() < 1)
    throw std::invalid_argument("finite set: elements must be >= 1");
  impl->elems = std::move(elements);
  impl->spec = "finite:" + std::to_string(impl->elems.size());
  return IntegerSet(std::move(impl));
}

IntegerSet IntegerSet::predicate(std::function<bool(std::uint64_t)> pred, std::string name) {
  auto impl = std::make_shared<PredImpl>();
  impl->pred = std::move(pred);
  impl->spec = std::move(name);
  return IntegerSet(std::move(impl));
}

IntegerSet IntegerSet::complement(IntegerSet a) {
  auto impl = std::make_shared<ComplImpl>();
  impl->inner = a.impl();
  impl->spec = "compl(" + a.spec() + ")";
  return IntegerSet(std::move(impl));
}

IntegerSet IntegerSet::unite(std::vector<IntegerSet> operands) {
  if (operands.size() < 2)
    throw std::invalid_argument("union: needs at least 2 operands");
  auto impl = std::make_shared<ComboImpl>();
  impl->is_union = true;
  std::string s = "union(";
  for (size_t i = 0; i < operands.size(); ++i) {
    impl->ops.push_back(operands[i].impl());
    s += (i ? "; " : "") + operands[i].spec();
  }
  impl->spec = s + ")";
  return IntegerSet(std::move(impl));
}

IntegerSet IntegerSet::intersect(std::vector<IntegerSet> operands) {
  if (operands.size() < 2)
    throw std::invalid_argument("inter: needs at least 2 operands");
  auto impl = std::make_shared<ComboImpl>();
  impl->is_union = false;
  std::string s = "inter(";
  for (size_t i = 0; i < operands.size(); ++i) {
    impl->ops.push_back(operands[i].impl());
    s += (i ? "; " : "") + operands[i].spec();
  }
  impl->spec = s + ")";
  return IntegerSet(std::move(impl));
}

IntegerSet IntegerSet::toggle(IntegerSet a, std::vector<std::uint64_t> elements) {
  auto impl = std::make_shared<ToggleImpl>();
  impl->inner = a.impl();
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  impl->flips = std::move(elements);
  impl->spec = "toggle(" + a.spec() + ";" + std::to_string(impl->flips.size()) + ")";
  return IntegerSet(std::move(impl));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

// split on ';' at paren depth 0
std::vector<std::string_view> split_operands(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ';' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

std::uint64_t parse_u64(std::string_view tok, std::string_view whole) {
  try {
    size_t pos = 0;
    const std::string t(tok);
    const unsigned long long v = std::stoull(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw std::invalid_argument("bad set spec `" + std::string(whole) + "`");
  }
}

}  // namespace

IntegerSet parse_set(std::string_view spec0) {
  const std::string_view spec = trim(spec0);
  auto bad = [&] { return std::invalid_argument("unknown set spec `" + std::string(spec) + "`"); };
  if (spec == "evens") return IntegerSet::evens();
  if (spec == "odds") return IntegerSet::ap(2, 1);
  if (spec == "naturals") return IntegerSet::naturals();
  if (spec.starts_with("ap:")) {
    const auto body = spec.substr(3);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) throw bad();
    const std::uint64_t a = parse_u64(body.substr(0, comma), spec);
    const std::uint64_t b = parse_u64(body.substr(comma + 1), spec);
    if (a == 0)
      throw std::invalid_argument("invalid set spec `" + std::string(spec) +
                                  "`: modulus a must be >= 1");
    return IntegerSet::ap(a, b);
  }
  if (spec.starts_with("primes:"))
    return IntegerSet::primes(parse_u64(spec.substr(7), spec));
  if (spec == "block:pow2-alt") return IntegerSet::block_pow2_alt();
  if (spec.starts_with("block:balanced:"))
    return IntegerSet::block_balanced_random(
        static_cast<std::uint32_t>(parse_u64(spec.substr(15), spec)));
  auto parse_call = [&](std::string_view head) -> std::optional<std::vector<IntegerSet>> {
    if (!spec.starts_with(head) || spec.size() < head.size() + 2) return std::nullopt;
    if (spec[head.size()] != '(' || spec.back() != ')') return std::nullopt;
    const auto body = spec.substr(head.size() + 1, spec.size() - head.size() - 2);
    std::vector<IntegerSet> ops;
    for (auto part : split_operands(body)) ops.push_back(parse_set(part));
    return ops;
  };
  if (auto ops = parse_call("union")) return IntegerSet::unite(std::move(*ops));
  if (auto ops = parse_call("inter")) return IntegerSet::intersect(std::move(*ops));
  if (auto ops = parse_call("compl")) {
    if (ops->size() != 1)
      throw std::invalid_argument("compl takes exactly one operand in `" + std::string(spec) +
                                  "`");
    return IntegerSet::complement(std::move((*ops)[0]));
  }
  throw bad();
}

}  // namespace psidensity
