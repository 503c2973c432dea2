#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "psidensity/density.hpp"
#include "psidensity/integer_set.hpp"
#include "psidensity/series_density.hpp"
#include "psidensity/weight.hpp"

namespace psidensity {

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

// One inequality lhs <= rhs + slack, checked with an instrument uncertainty:
//   pass     violation <= 0
//   fail     violation >  uncertainty
//   else     inconclusive
struct Inequality {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  double uncertainty = 0.0;
};

struct TheoremReport {
  std::string theorem_id;
  std::map<std::string, std::string> inputs;
  std::vector<std::pair<std::string, double>> measured;
  std::vector<Inequality> inequalities;
  double slack = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  bool precondition_ok = true;
  std::string precondition_note;
  std::vector<std::string> flags;
};

// Applies the verdict rule above to the collected inequalities.
Verdict decide(const std::vector<Inequality>& ineqs, double slack);

// Bracket nesting lower_phi <= lower_psi and upper_psi <= upper_phi for psi
// concave with respect to phi (checked numerically: psi'/phi' non-increasing
// over a sampled grid). window is the tail-window fraction of the underlying
// density estimates.
TheoremReport verify_th1(const IntegerSet& A, const Weight& psi, const Weight& phi,
                         std::uint64_t N, double slack, double window = 0.5);

// Specialization psi = log(1+x), phi = x.
TheoremReport verify_chain_asym_log(const IntegerSet& A, std::uint64_t N, double slack,
                                    double window = 0.5);

// Sandwich with c = c2/c1 from the measured ratio psi'/phi' over the tail
// sample window [N*tail_lo, N]; asserts bracket equality when c is 1.
TheoremReport verify_equiv(const IntegerSet& A, const Weight& psi, const Weight& phi,
                           std::uint64_t N, double slack, double window = 0.5,
                           double tail_lo = 0.5);

// |point - 1/a| <= slack and bracket width <= 2*slack for the progression
// an + b under psi.
TheoremReport verify_regularity(const Weight& psi, std::uint64_t a, std::uint64_t b,
                                std::uint64_t N, double slack);

// ratio_A(n) + ratio_{A^c}(n) = 1 at every checkpoint, within tol.
TheoremReport verify_complement(const IntegerSet& A, const Weight& psi, std::uint64_t N,
                                double tol = 1e-10);

// Logarithmic bracket vs analytic grid trace: lower_log - slack <= min value
// and max value <= upper_log + slack. Grid values carry their tail-model
// uncertainty, so unstable tails yield inconclusive rather than fail.
TheoremReport verify_analytic_chain(const IntegerSet& A, std::uint64_t N,
                                    std::vector<double> p_grid, double slack,
                                    double window = 0.5, std::uint64_t n_override = 0);

// Asymptotic bracket vs Abel grid trace, plus extrapolated-value equality
// when the asymptotic bracket is tight.
TheoremReport verify_abel_chain(const IntegerSet& A, std::uint64_t N,
                                std::vector<double> x_grid, double slack,
                                double window = 0.5);

// Weighted-mean sandwich for a bounded sequence s under weights a_n =
// a_weight'(n), b_n = b_weight'(n) with a_n/b_n non-increasing.
TheoremReport rajagopal_check(const std::function<double(std::uint64_t)>& s,
                              const std::string& s_name, const Weight& a_weight,
                              const Weight& b_weight, std::uint64_t N, double slack,
                              double window = 0.5);

// Subsequence-formula consistency: density_via_subsequence and
// density_estimate agree on the same set within slack.
TheoremReport verify_lem1_consistency(const IntegerSet& A, const Weight& psi,
                                      std::uint64_t N, std::uint64_t M, double slack,
                                      double window = 0.5);

// ---- suite runner ----

struct SuiteOptions {
  std::uint64_t n = 1 << 22;
  double slack = 0.03;
  double window = 0.25;
  unsigned threads = 0;  // 0: use available parallelism / PSIDENSITY_THREADS
};

struct SuiteReport {
  std::string suite;
  std::vector<TheoremReport> reports;
  int passes = 0, fails = 0, inconclusive = 0;
};

// suites: th1 | chains | regularity | rajagopal | all
SuiteReport run_suite(const std::string& suite, const SuiteOptions& opt = {});

}  // namespace psidensity
