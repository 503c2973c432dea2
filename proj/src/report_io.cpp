#include "psidensity/report_io.hpp"

#include <ostream>

#include <json.hpp>

namespace psidensity {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

ordered series_json(const DensitySeries& s) {
  ordered j;
  j["set"] = s.set_spec;
  j["weight"] = s.weight_name;
  j["log_space"] = s.log_space;
  j["start_k"] = s.start_k;
  ordered pts = ordered::array();
  for (const auto& p : s.points) {
    ordered q;
    q["n"] = p.n;
    q[s.log_space ? "log_numerator" : "numerator"] = p.num;
    q[s.log_space ? "log_denominator" : "denominator"] = p.den;
    q["ratio"] = p.ratio;
    pts.push_back(std::move(q));
  }
  j["checkpoints"] = std::move(pts);
  return j;
}

ordered estimate_json(const DensityEstimate& e) {
  ordered j;
  j["lower"] = e.lower;
  j["upper"] = e.upper;
  j["point"] = e.point;
  j["n"] = e.N;
  j["window_start"] = e.window_start;
  j["converged"] = e.converged;
  if (!e.warning.empty()) j["warning"] = e.warning;
  j["series"] = series_json(e.series);
  return j;
}

ordered grid_json(const SeriesDensityEstimate& e) {
  ordered j;
  j["method"] = e.method == SeriesMethod::Analytic ? "analytic" : "abel";
  if (e.method == SeriesMethod::Analytic)
    j["normalization"] = e.norm == AnalyticNorm::PMinusOne ? "p-1" : "1/zeta";
  ordered grid = ordered::array();
  for (const auto& g : e.grid) {
    ordered q;
    q["param"] = g.param;
    q["N"] = g.N;
    q["value"] = g.value;
    q["tail_bound"] = g.tail_bound;
    if (e.method == SeriesMethod::Analytic) {
      q["tail_correction"] = g.tail_correction;
      q["d_hat"] = g.d_hat;
      q["d_hat_prev"] = g.d_hat_prev;
      q["flagged"] = g.flagged;
    }
    grid.push_back(std::move(q));
  }
  j["grid"] = std::move(grid);
  j["extrapolated"] = e.extrapolated;
  return j;
}

ordered report_json(const TheoremReport& r) {
  ordered j;
  j["theorem_id"] = r.theorem_id;
  ordered in;
  for (const auto& [k, v] : r.inputs) in[k] = v;
  j["inputs"] = std::move(in);
  ordered meas = ordered::array();
  for (const auto& [k, v] : r.measured) {
    ordered q;
    q["name"] = k;
    q["value"] = v;
    meas.push_back(std::move(q));
  }
  j["measured"] = std::move(meas);
  ordered ineqs = ordered::array();
  for (const auto& q : r.inequalities) {
    ordered e;
    e["name"] = q.name;
    e["lhs"] = q.lhs;
    e["rhs"] = q.rhs;
    e["uncertainty"] = q.uncertainty;
    ineqs.push_back(std::move(e));
  }
  j["inequalities"] = std::move(ineqs);
  j["slack"] = r.slack;
  j["verdict"] = to_string(r.verdict);
  j["precondition_ok"] = r.precondition_ok;
  if (!r.precondition_note.empty()) j["precondition_note"] = r.precondition_note;
  if (!r.flags.empty()) j["flags"] = r.flags;
  return j;
}

ordered trace_json(const Trace& t) {
  ordered arr = ordered::array();
  for (const auto& [x, y] : t) arr.push_back(ordered::array({x, y}));
  return arr;
}

}  // namespace

std::string to_json(const DensitySeries& s) { return series_json(s).dump(2); }
std::string to_json(const DensityEstimate& e) { return estimate_json(e).dump(2); }
std::string to_json(const SeriesDensityEstimate& e) { return grid_json(e).dump(2); }
std::string to_json(const TheoremReport& r) { return report_json(r).dump(2); }

std::string to_json(const SuiteReport& r) {
  ordered j;
  j["suite"] = r.suite;
  j["passes"] = r.passes;
  j["fails"] = r.fails;
  j["inconclusive"] = r.inconclusive;
  ordered reps = ordered::array();
  for (const auto& rep : r.reports) reps.push_back(report_json(rep));
  j["reports"] = std::move(reps);
  return j.dump(2);
}

std::string to_json(const GrowthDiagnostics& g) {
  ordered j;
  j["order_trace"] = trace_json(g.order_trace);
  j["asv_trace"] = trace_json(g.asv_trace);
  j["cond2_trace"] = trace_json(g.cond2_trace);
  j["logconcavity_trace"] = trace_json(g.logconcavity_trace);
  j["hyper_trace"] = trace_json(g.hyper_trace);
  j["finite_order"] = g.finite_order;
  j["asv"] = g.asv;
  j["cond2_bounded"] = g.cond2_bounded;
  j["log_concave"] = g.log_concave;
  j["hyper_growth_ok"] = g.hyper_growth_ok;
  j["order_estimate"] = g.order_estimate;
  j["order_final"] = g.order_final;
  j["cond2_sup"] = g.cond2_sup;
  return j.dump(2);
}

std::string to_json(const PwlLimitReport& r) {
  ordered j;
  j["p"] = r.p;
  j["ratio_trace"] = trace_json(r.ratio_trace);
  j["order_trace"] = trace_json(r.order_trace);
  j["final_ratio"] = r.final_ratio;
  j["final_order"] = r.final_order;
  return j.dump(2);
}

std::string to_json(const RatioBoundednessReport& r) {
  ordered j;
  j["a"] = r.a;
  j["b"] = r.b;
  j["log_ratio_trace"] = trace_json(r.log_ratio_trace);
  j["bounded"] = r.bounded;
  j["c_hat"] = r.c_hat;
  j["order_bound"] = r.order_bound;
  j["measured_order"] = r.measured_order;
  j["measured_order_raw"] = r.measured_order_raw;
  j["order_cross_check"] = r.order_cross_check;
  return j.dump(2);
}

std::string to_json(const ExceptionalSetReport& r) {
  ordered j;
  j["eps"] = r.eps;
  j["density_trace"] = trace_json(r.density_trace);
  j["final_density"] = r.final_density;
  j["measure_at_X"] = r.measure_at_X;
  j["tends_to_zero"] = r.tends_to_zero;
  j["precondition_ok"] = r.precondition_ok;
  return j.dump(2);
}

void write_csv(std::ostream& os, const DensitySeries& s) {
  if (s.log_space)
    os << "# log_space=true\nn,log_numerator,log_denominator,ratio\n";
  else
    os << "n,numerator,denominator,ratio\n";
  os.precision(17);
  for (const auto& p : s.points)
    os << p.n << ',' << p.num << ',' << p.den << ',' << p.ratio << '\n';
}

void write_csv(std::ostream& os, const Trace& t, const std::string& header) {
  os << header << '\n';
  os.precision(17);
  for (const auto& [x, y] : t) os << x << ',' << y << '\n';
}

void write_plotpoints(std::ostream& os, const DensitySeries& s) {
  os << "# density " << s.set_spec << " " << s.weight_name << '\n';
  os.precision(17);
  for (const auto& p : s.points) os << p.n << ' ' << p.ratio << '\n';
}

void write_plotpoints(std::ostream& os, const Trace& t, const std::string& name) {
  os << "# " << name << '\n';
  os.precision(17);
  for (const auto& [x, y] : t) os << x << ' ' << y << '\n';
}

}  // namespace psidensity
