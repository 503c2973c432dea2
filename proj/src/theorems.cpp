#include "psidensity/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>

#include "psidensity/corpus.hpp"
#include "psidensity/stable_sum.hpp"

namespace psidensity {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

Verdict decide(const std::vector<Inequality>& ineqs, double slack) {
  bool all_pass = true;
  for (const auto& q : ineqs) {
    const double violation = q.lhs - (q.rhs + slack);
    if (violation > 0.0) {
      all_pass = false;
      if (violation > q.uncertainty) return Verdict::Fail;
    }
  }
  return all_pass ? Verdict::Pass : Verdict::Inconclusive;
}

namespace {

void finish(TheoremReport& rep) {
  if (!rep.precondition_ok) {
    rep.verdict = Verdict::Inconclusive;
    return;
  }
  rep.verdict = decide(rep.inequalities, rep.slack);
}

// non-increase of psi'/phi' sampled geometrically over [lo, X]
bool ratio_nonincreasing(const Weight& psi, const Weight& phi, double X, int points,
                         std::string* note) {
  const double lo = std::max({1.0, psi.domain_start() + 1e-6, phi.domain_start() + 1e-6});
  double prev = psi.log_deriv(lo) - phi.log_deriv(lo);
  for (int i = 1; i <= points; ++i) {
    const double x = lo * std::pow(X / lo, double(i) / points);
    const double r = psi.log_deriv(x) - phi.log_deriv(x);
    if (r > prev + 1e-9) {
      if (note)
        *note = "psi'/phi' increases near x=" + std::to_string(x) + " (" + psi.name() +
                " vs " + phi.name() + ")";
      return false;
    }
    prev = r;
  }
  return true;
}

}  // namespace

TheoremReport verify_th1(const IntegerSet& A, const Weight& psi, const Weight& phi,
                         std::uint64_t N, double slack, double window) {
  TheoremReport rep;
  rep.theorem_id = "TH1";
  rep.slack = slack;
  rep.inputs = {{"set", A.spec()},
                {"psi", psi.name()},
                {"phi", phi.name()},
                {"n", std::to_string(N)},
                {"window", std::to_string(window)}};
  rep.precondition_ok =
      ratio_nonincreasing(psi, phi, static_cast<double>(N), 1000, &rep.precondition_note);
  if (!rep.precondition_ok) {
    finish(rep);
    return rep;
  }
  const auto ep = density_estimate(A, psi, N, window);
  const auto ef = density_estimate(A, phi, N, window);
  rep.measured = {{"lower_phi", ef.lower},
                  {"upper_phi", ef.upper},
                  {"lower_psi", ep.lower},
                  {"upper_psi", ep.upper}};
  rep.inequalities = {{"lower_phi <= lower_psi", ef.lower, ep.lower, 0.0},
                      {"upper_psi <= upper_phi", ep.upper, ef.upper, 0.0}};
  finish(rep);
  return rep;
}

TheoremReport verify_chain_asym_log(const IntegerSet& A, std::uint64_t N, double slack,
                                    double window) {
  auto rep = verify_th1(A, make_log(), make_power(1.0), N, slack, window);
  rep.theorem_id = "CHAIN_ASYM_LOG";
  return rep;
}

TheoremReport verify_equiv(const IntegerSet& A, const Weight& psi, const Weight& phi,
                           std::uint64_t N, double slack, double window, double tail_lo) {
  TheoremReport rep;
  rep.theorem_id = "EQUIV";
  rep.slack = slack;
  rep.inputs = {{"set", A.spec()},
                {"psi", psi.name()},
                {"phi", phi.name()},
                {"n", std::to_string(N)},
                {"tail_lo", std::to_string(tail_lo)}};
  const double lo =
      std::max({1.0, psi.domain_start() + 1e-6, phi.domain_start() + 1e-6,
                static_cast<double>(N) * tail_lo});
  double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0;
  const int points = 1000;
  for (int i = 0; i <= points; ++i) {
    const double x = lo * std::pow(static_cast<double>(N) / lo, double(i) / points);
    const double r = std::exp(psi.log_deriv(x) - phi.log_deriv(x));
    c1 = std::min(c1, r);
    c2 = std::max(c2, r);
  }
  if (!(c1 > 0.0) || !std::isfinite(c2)) {
    rep.precondition_ok = false;
    rep.precondition_note = "measured derivative ratio not within (0, inf)";
    finish(rep);
    return rep;
  }
  const double c = c2 / c1;
  const auto ep = density_estimate(A, psi, N, window);
  const auto ef = density_estimate(A, phi, N, window);
  rep.measured = {{"c1_hat", c1},          {"c2_hat", c2},
                  {"c", c},                {"lower_phi", ef.lower},
                  {"upper_phi", ef.upper}, {"lower_psi", ep.lower},
                  {"upper_psi", ep.upper}};
  rep.inequalities = {
      {"lower_phi/c <= lower_psi", ef.lower / c, ep.lower, 0.0},
      {"lower_psi <= c*lower_phi", ep.lower, c * ef.lower, 0.0},
      {"upper_phi/c <= upper_psi", ef.upper / c, ep.upper, 0.0},
      {"upper_psi <= c*upper_phi", ep.upper, c * ef.upper, 0.0},
  };
  if (c < 1.0 + 1e-6) {
    rep.inequalities.push_back(
        {"|lower_psi - lower_phi| = 0", std::abs(ep.lower - ef.lower), 0.0, 0.0});
    rep.inequalities.push_back(
        {"|upper_psi - upper_phi| = 0", std::abs(ep.upper - ef.upper), 0.0, 0.0});
    rep.flags.push_back("c=1 equality case");
  }
  finish(rep);
  return rep;
}

TheoremReport verify_regularity(const Weight& psi, std::uint64_t a, std::uint64_t b,
                                std::uint64_t N, double slack) {
  TheoremReport rep;
  rep.theorem_id = "REGULARITY";
  rep.slack = slack;
  rep.inputs = {{"psi", psi.name()},
                {"a", std::to_string(a)},
                {"b", std::to_string(b)},
                {"n", std::to_string(N)}};
  const auto A = IntegerSet::ap(a, b);
  const auto est = density_estimate(A, psi, N);
  rep.measured = {{"point", est.point},
                  {"lower", est.lower},
                  {"upper", est.upper},
                  {"target", 1.0 / static_cast<double>(a)}};
  if (psi.declared_class() == WeightClass::D2) {
    // hypothesis trace psi'(an+b)/psi(n) at a few tail points
    for (double f : {0.25, 0.5, 1.0}) {
      const double n = f * static_cast<double>(N);
      const double v = std::exp(
          psi.log_deriv(static_cast<double>(a) * n + static_cast<double>(b)) -
          psi.log_value(n));
      rep.measured.push_back({"hyp_ratio@" + std::to_string(static_cast<std::uint64_t>(n)), v});
    }
  }
  const double target = 1.0 / static_cast<double>(a);
  rep.inequalities = {
      {"|point - 1/a| <= slack", std::abs(est.point - target), 0.0, 0.0},
      {"width <= 2*slack", est.upper - est.lower, slack, 0.0},  // width - slack <= slack
  };
  finish(rep);
  return rep;
}

TheoremReport verify_complement(const IntegerSet& A, const Weight& psi, std::uint64_t N,
                                double tol) {
  TheoremReport rep;
  rep.theorem_id = "COMPLEMENT";
  rep.slack = tol;
  rep.inputs = {{"set", A.spec()}, {"psi", psi.name()}, {"n", std::to_string(N)}};
  const auto sa = partial_sums(A, psi, N);
  const auto sc = partial_sums(IntegerSet::complement(A), psi, N);
  double worst = 0.0;
  for (size_t i = 0; i < sa.points.size(); ++i)
    worst = std::max(worst,
                     std::abs(sa.points[i].ratio + sc.points[i].ratio - 1.0));
  rep.measured = {{"max_deviation", worst}};
  rep.inequalities = {{"ratio_A + ratio_Ac = 1", worst, 0.0, 0.0}};
  finish(rep);
  return rep;
}

TheoremReport verify_analytic_chain(const IntegerSet& A, std::uint64_t N,
                                    std::vector<double> p_grid, double slack, double window,
                                    std::uint64_t n_override) {
  TheoremReport rep;
  rep.theorem_id = "ANALYTIC_CHAIN";
  rep.slack = slack;
  rep.inputs = {{"set", A.spec()}, {"n", std::to_string(N)}};
  const auto logest = density_estimate(A, make_log(), N, window);
  const auto ana = analytic_density(A, std::move(p_grid), 1e-4, AnalyticNorm::PMinusOne,
                                    n_override);
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
  double umin = 0.0, umax = 0.0;
  for (const auto& g : ana.grid) {
    if (g.value < vmin) {
      vmin = g.value;
      umin = g.tail_bound;
    }
    if (g.value > vmax) {
      vmax = g.value;
      umax = g.tail_bound;
    }
    if (g.flagged)
      rep.flags.push_back("tail model unstable at p=" + std::to_string(g.param) +
                          " (d_hat " + std::to_string(g.d_hat_prev) + " -> " +
                          std::to_string(g.d_hat) + ")");
  }
  rep.measured = {{"lower_log", logest.lower},
                  {"upper_log", logest.upper},
                  {"min_analytic", vmin},
                  {"max_analytic", vmax},
                  {"extrapolated", ana.extrapolated}};
  rep.inequalities = {
      {"lower_log <= min_analytic", logest.lower, vmin, umin},
      {"max_analytic <= upper_log", vmax, logest.upper, umax},
  };
  finish(rep);
  return rep;
}

TheoremReport verify_abel_chain(const IntegerSet& A, std::uint64_t N,
                                std::vector<double> x_grid, double slack, double window) {
  TheoremReport rep;
  rep.theorem_id = "ABEL_CHAIN";
  rep.slack = slack;
  rep.inputs = {{"set", A.spec()}, {"n", std::to_string(N)}};
  const auto asym = density_estimate(A, make_power(1.0), N, window);
  const auto abel = abel_density(A, std::move(x_grid));
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
  for (const auto& g : abel.grid) {
    vmin = std::min(vmin, g.value);
    vmax = std::max(vmax, g.value);
  }
  rep.measured = {{"lower_asym", asym.lower},
                  {"upper_asym", asym.upper},
                  {"min_abel", vmin},
                  {"max_abel", vmax},
                  {"extrapolated", abel.extrapolated}};
  rep.inequalities = {
      {"lower_asym <= min_abel", asym.lower, vmin, 0.0},
      {"max_abel <= upper_asym", vmax, asym.upper, 0.0},
  };
  if (asym.upper - asym.lower < slack) {
    rep.inequalities.push_back({"|extrapolated - point| = 0",
                                std::abs(abel.extrapolated - asym.point), 0.0, 0.0});
    rep.flags.push_back("tight asymptotic bracket: extrapolated equality asserted");
  }
  finish(rep);
  return rep;
}

TheoremReport rajagopal_check(const std::function<double(std::uint64_t)>& s,
                              const std::string& s_name, const Weight& a_weight,
                              const Weight& b_weight, std::uint64_t N, double slack,
                              double window) {
  TheoremReport rep;
  rep.theorem_id = "RAJAGOPAL";
  rep.slack = slack;
  rep.inputs = {{"sequence", s_name},
                {"a_weight", a_weight.name()},
                {"b_weight", b_weight.name()},
                {"n", std::to_string(N)}};
  rep.precondition_ok = ratio_nonincreasing(a_weight, b_weight, static_cast<double>(N), 1000,
                                            &rep.precondition_note);
  if (!rep.precondition_ok) {
    finish(rep);
    return rep;
  }
  // sigma(s, a) and sigma(s, b) at the shared checkpoint schedule
  const auto schedule = checkpoint_schedule(N);
  const std::uint64_t k0 =
      std::max(a_weight.first_integer(), b_weight.first_integer());
  StableSum na, da, nb, db;
  double la = 1.0, ua = 0.0, lb = 1.0, ub = 0.0;
  auto cp = schedule.begin();
  const std::uint64_t wstart = static_cast<std::uint64_t>(window * static_cast<double>(N));
  for (std::uint64_t k = k0; k <= N; ++k) {
    const double sv = s(k);
    const double wa = a_weight.deriv(static_cast<double>(k));
    const double wb = b_weight.deriv(static_cast<double>(k));
    na.add(wa * sv);
    da.add(wa);
    nb.add(wb * sv);
    db.add(wb);
    while (cp != schedule.end() && *cp < k0) ++cp;
    if (cp != schedule.end() && *cp == k) {
      if (k >= wstart) {
        const double ra = na.value() / da.value(), rb = nb.value() / db.value();
        la = std::min(la, ra);
        ua = std::max(ua, ra);
        lb = std::min(lb, rb);
        ub = std::max(ub, rb);
      }
      ++cp;
    }
  }
  rep.measured = {{"lower_a", la}, {"upper_a", ua}, {"lower_b", lb}, {"upper_b", ub}};
  rep.inequalities = {{"lower_b <= lower_a", lb, la, 0.0},
                      {"upper_a <= upper_b", ua, ub, 0.0}};
  finish(rep);
  return rep;
}

TheoremReport verify_lem1_consistency(const IntegerSet& A, const Weight& psi,
                                      std::uint64_t N, std::uint64_t M, double slack,
                                      double window) {
  TheoremReport rep;
  rep.theorem_id = "LEM1_CONSISTENCY";
  rep.slack = slack;
  rep.inputs = {{"set", A.spec()},
                {"psi", psi.name()},
                {"n", std::to_string(N)},
                {"m", std::to_string(M)}};
  const auto direct = density_estimate(A, psi, N, window);
  const auto sub = density_via_subsequence(A, psi, M, window);
  if (!sub.warning.empty()) rep.flags.push_back(sub.warning);
  rep.measured = {{"lower_direct", direct.lower},
                  {"upper_direct", direct.upper},
                  {"lower_sub", sub.lower},
                  {"upper_sub", sub.upper}};
  rep.inequalities = {
      {"|lower_sub - lower_direct| = 0", std::abs(sub.lower - direct.lower), 0.0, 0.0},
      {"|upper_sub - upper_direct| = 0", std::abs(sub.upper - direct.upper), 0.0, 0.0}};
  finish(rep);
  return rep;
}

namespace {

unsigned thread_budget(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PSIDENSITY_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 4;
}

// runs jobs concurrently, preserving input order in the output
std::vector<TheoremReport> run_jobs(std::vector<std::function<TheoremReport()>> jobs,
                                    unsigned threads) {
  std::vector<TheoremReport> out(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      out[i] = jobs[i]();
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(threads, jobs.size() ? jobs.size() : 1);
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

SuiteReport run_suite(const std::string& suite, const SuiteOptions& opt) {
  const bool all = suite == "all";
  if (!all && suite != "th1" && suite != "chains" && suite != "regularity" &&
      suite != "rajagopal")
    throw std::invalid_argument("unknown suite `" + suite + "`");
  SuiteReport out;
  out.suite = suite;
  const auto corpus = comparison_corpus();
  std::vector<std::function<TheoremReport()>> jobs;

  if (all || suite == "th1") {
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"log", "id"}, {"log", "pow:2"}, {"id", "pow:2"}, {"pow:0.5", "pow:3"}};
    for (const auto& A : corpus)
      for (const auto& [ps, fs] : pairs)
        jobs.push_back([A, ps, fs, opt] {
          return verify_th1(A, parse_weight(ps), parse_weight(fs), opt.n, opt.slack,
                            opt.window);
        });
  }
  if (all || suite == "chains") {
    for (const auto& A : corpus) {
      jobs.push_back([A, opt] {
        return verify_chain_asym_log(A, opt.n, opt.slack, opt.window);
      });
      jobs.push_back([A, opt] {
        return verify_analytic_chain(A, opt.n, {1.1, 1.05}, opt.slack, opt.window);
      });
      jobs.push_back([A, opt] {
        return verify_abel_chain(A, opt.n, {0.999, 0.9999}, opt.slack, opt.window);
      });
    }
  }
  if (all || suite == "regularity") {
    for (const std::string ps : {"pow:0.5", "id", "pow:2", "xlogx"})
      for (std::uint64_t a : {2, 3, 5, 7})
        for (std::uint64_t b : {0, 1})
          jobs.push_back([ps, a, b, opt] {
            return verify_regularity(parse_weight(ps), a, b, opt.n, opt.slack);
          });
  }
  if (all || suite == "rajagopal") {
    for (const auto& A : corpus) {
      auto chi = [A](std::uint64_t k) { return A.contains(k) ? 1.0 : 0.0; };
      jobs.push_back([A, chi, opt] {
        return rajagopal_check(chi, A.spec(), make_power(0.5), make_power(2.0), opt.n,
                               opt.slack, opt.window);
      });
    }
  }

  out.reports = run_jobs(std::move(jobs), thread_budget(opt.threads));
  for (const auto& r : out.reports) {
    if (r.verdict == Verdict::Pass) ++out.passes;
    else if (r.verdict == Verdict::Fail) ++out.fails;
    else ++out.inconclusive;
  }
  return out;
}

}  // namespace psidensity
