#include "psidensity/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "psidensity/corpus.hpp"
#include "psidensity/counterexamples.hpp"
#include "psidensity/density.hpp"
#include "psidensity/report_io.hpp"
#include "psidensity/series_density.hpp"
#include "psidensity/theorems.hpp"

namespace psidensity {

namespace {

struct OutputSink {
  std::string path = "-";
  std::string format;  // csv | json | plotpoints; default inferred

  std::string resolve_format(const std::string& fallback) const {
    if (!format.empty()) return format;
    if (path.ends_with(".csv")) return "csv";
    if (path.ends_with(".json")) return "json";
    if (path.ends_with(".dat") || path.ends_with(".txt")) return "plotpoints";
    return fallback;
  }
  void write(const std::string& payload, std::ostream& fallback_stream) const {
    if (path == "-") {
      fallback_stream << payload;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file `" + path + "`");
    f << payload;
    if (!f) throw std::runtime_error("write failed for `" + path + "`");
  }
};

void add_output_opts(CLI::App* cmd, OutputSink& sink) {
  cmd->add_option("--out", sink.path, "Output path, or - for stdout")->default_str("-");
  cmd->add_option("--format", sink.format, "csv | json | plotpoints (default from extension)");
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss{csv};
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"psidensity: weighted densities of integer sets"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Optional key = value config file ([subcommand] sections)");

  // ---- density ----
  auto* density = app.add_subcommand("density", "Weighted partial-sum density of a set");
  std::string d_set = "evens", d_weight = "id";
  std::uint64_t d_n = 1 << 20;
  double d_window = 0.5, d_tol = 0.02;
  bool d_subseq = false;
  OutputSink d_sink;
  density->add_option("--set", d_set, "Set spec (ap:a,b | primes:L | evens | odds | block:pow2-alt | union/inter/compl)")
      ->default_str("evens");
  density->add_option("--weight", d_weight, "Weight spec (pow:q | log | xlogx | expsqrt | exppow:s | pwl:p | id)")
      ->default_str("id");
  density->add_option("--n", d_n, "Truncation level N")->default_str("1048576");
  density->add_option("--window", d_window, "Tail window fraction")->default_str("0.5");
  density->add_option("--tol", d_tol, "Convergence tolerance for the bracket")
      ->default_str("0.02");
  density->add_flag("--subsequence", d_subseq,
                    "Evaluate along the set's own elements (n terms instead of N integers)");
  add_output_opts(density, d_sink);

  // ---- series ----
  auto* series = app.add_subcommand("series", "Analytic or Abel density via truncated series");
  std::string s_method = "analytic", s_set = "evens", s_grid, s_norm = "p1";
  double s_tol = 1e-4, s_reltail = 1e-14;
  OutputSink s_sink;
  series->add_option("--method", s_method, "analytic | abel")->default_str("analytic");
  series->add_option("--set", s_set, "Set spec")->default_str("evens");
  series->add_option("--grid", s_grid, "Comma-separated grid (p values > 1, or x values in (0,1))");
  series->add_option("--tol", s_tol, "Analytic tail tolerance")->default_str("1e-4");
  series->add_option("--reltail", s_reltail, "Abel truncation tail")->default_str("1e-14");
  series->add_option("--norm", s_norm, "Analytic normalization: p1 | zeta")->default_str("p1");
  add_output_opts(series, s_sink);

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "Run a comparison-theorem suite over the corpus");
  std::string v_suite = "all";
  SuiteOptions v_opt;
  OutputSink v_sink;
  verify->add_option("--suite", v_suite, "all | th1 | chains | regularity | rajagopal")
      ->default_str("all");
  verify->add_option("--n", v_opt.n, "Truncation level")->default_str("4194304");
  verify->add_option("--slack", v_opt.slack, "Inequality slack")->default_str("0.03");
  verify->add_option("--window", v_opt.window, "Tail window fraction")->default_str("0.25");
  verify->add_option("--threads", v_opt.threads,
                     "Max concurrent checks (default: available parallelism, or PSIDENSITY_THREADS)")
      ->default_str("0");
  add_output_opts(verify, v_sink);

  // ---- counterexample ----
  auto* cx = app.add_subcommand("counterexample", "Growth/regularity counterexample traces");
  std::string c_which = "pwl:2";
  double c_x = 1e6;
  OutputSink c_sink;
  cx->add_option("--which", c_which,
                 "pwl:p | cond2:<weight> | ratio:<weight>,a,b | eset:<weight>,eps")
      ->default_str("pwl:2");
  cx->add_option("--x", c_x, "Range limit X")->default_str("1e6");
  add_output_opts(cx, c_sink);

  // ---- compare ----
  auto* cmp = app.add_subcommand("compare", "One-shot comparison of two weights on a set");
  std::string m_set = "evens", m_psi = "log", m_phi = "id", m_mode = "th1";
  std::uint64_t m_n = 1 << 22;
  double m_slack = 0.03, m_window = 0.5;
  OutputSink m_sink;
  cmp->add_option("--set", m_set, "Set spec")->default_str("evens");
  cmp->add_option("--psi", m_psi, "Weight expected to sit inside")->default_str("log");
  cmp->add_option("--phi", m_phi, "Weight expected to sit outside")->default_str("id");
  cmp->add_option("--mode", m_mode, "th1 | equiv")->default_str("th1");
  cmp->add_option("--n", m_n, "Truncation level")->default_str("4194304");
  cmp->add_option("--slack", m_slack, "Inequality slack")->default_str("0.03");
  cmp->add_option("--window", m_window, "Tail window fraction")->default_str("0.5");
  add_output_opts(cmp, m_sink);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int code = app.exit(e, msg, msg);
    (code == 0 ? out : err) << msg.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (density->parsed()) {
      const auto A = parse_set(d_set);
      const auto w = parse_weight(d_weight);
      const auto est = d_subseq ? density_via_subsequence(A, w, d_n, d_window, d_tol)
                                : density_estimate(A, w, d_n, d_window, d_tol);
      const std::string fmt = d_sink.resolve_format("csv");
      std::ostringstream payload;
      if (fmt == "csv")
        write_csv(payload, est.series);
      else if (fmt == "plotpoints")
        write_plotpoints(payload, est.series);
      else
        payload << to_json(est) << '\n';
      d_sink.write(payload.str(), out);
      if (!est.warning.empty()) err << "warning: " << est.warning << '\n';
      return 0;
    }
    if (series->parsed()) {
      const auto A = parse_set(s_set);
      SeriesDensityEstimate est;
      if (s_method == "analytic") {
        const auto norm = s_norm == "zeta" ? AnalyticNorm::InverseZeta : AnalyticNorm::PMinusOne;
        est = s_grid.empty() ? analytic_density(A, default_p_grid(), s_tol, norm)
                             : analytic_density(A, parse_grid(s_grid), s_tol, norm);
      } else if (s_method == "abel") {
        est = s_grid.empty() ? abel_density(A, default_x_grid(), s_reltail)
                             : abel_density(A, parse_grid(s_grid), s_reltail);
      } else {
        err << "unknown series method `" << s_method << "`\n";
        return 2;
      }
      std::ostringstream payload;
      payload << to_json(est) << '\n';
      s_sink.write(payload.str(), out);
      return 0;
    }
    if (verify->parsed()) {
      const auto rep = run_suite(v_suite, v_opt);
      std::ostringstream payload;
      payload << to_json(rep) << '\n';
      v_sink.write(payload.str(), out);
      err << "suite " << rep.suite << ": " << rep.passes << " pass, " << rep.fails
          << " fail, " << rep.inconclusive << " inconclusive\n";
      return rep.fails == 0 ? 0 : 1;
    }
    if (cx->parsed()) {
      std::ostringstream payload;
      const std::string fmt = c_sink.resolve_format("csv");
      auto emit = [&](const Trace& t, const std::string& name, const std::string& json) {
        if (fmt == "json")
          payload << json << '\n';
        else if (fmt == "plotpoints")
          write_plotpoints(payload, t, name);
        else
          write_csv(payload, t, "x," + name);
      };
      if (c_which.starts_with("pwl:")) {
        const double p = std::stod(c_which.substr(4));
        const auto rep = pwl_limit_check(p, static_cast<int>(c_x < 64 ? c_x : 24));
        emit(rep.ratio_trace, "breakpoint_ratio", to_json(rep));
      } else if (c_which.starts_with("cond2:")) {
        const auto w = parse_weight(c_which.substr(6));
        const auto g = growth_diagnostics(w, c_x);
        emit(g.cond2_trace, "cond2", to_json(g));
      } else if (c_which.starts_with("ratio:")) {
        const std::string body = c_which.substr(6);
        const auto c2 = body.rfind(',');
        const auto c1 = body.rfind(',', c2 == std::string::npos ? c2 : c2 - 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
          err << "bad --which `" << c_which << "` (expected ratio:<weight>,a,b)\n";
          return 2;
        }
        const auto w = parse_weight(body.substr(0, c1));
        const double a = std::stod(body.substr(c1 + 1, c2 - c1 - 1));
        const double b = std::stod(body.substr(c2 + 1));
        const auto rep = ratio_boundedness_check(w, a, b, c_x);
        emit(rep.log_ratio_trace, "log_ratio", to_json(rep));
      } else if (c_which.starts_with("eset:")) {
        const std::string body = c_which.substr(5);
        const auto c1 = body.rfind(',');
        if (c1 == std::string::npos) {
          err << "bad --which `" << c_which << "` (expected eset:<weight>,eps)\n";
          return 2;
        }
        const auto w = parse_weight(body.substr(0, c1));
        const double eps = std::stod(body.substr(c1 + 1));
        const auto rep = exceptional_set_density(w, eps, c_x);
        emit(rep.density_trace, "eset_density", to_json(rep));
      } else {
        err << "unknown counterexample `" << c_which << "`\n";
        return 2;
      }
      c_sink.write(payload.str(), out);
      return 0;
    }
    if (cmp->parsed()) {
      const auto A = parse_set(m_set);
      const auto psi = parse_weight(m_psi);
      const auto phi = parse_weight(m_phi);
      TheoremReport rep;
      if (m_mode == "th1")
        rep = verify_th1(A, psi, phi, m_n, m_slack, m_window);
      else if (m_mode == "equiv")
        rep = verify_equiv(A, psi, phi, m_n, m_slack, m_window);
      else {
        err << "unknown compare mode `" << m_mode << "`\n";
        return 2;
      }
      std::ostringstream payload;
      payload << to_json(rep) << '\n';
      m_sink.write(payload.str(), out);
      return rep.verdict == Verdict::Fail ? 1 : 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace psidensity
