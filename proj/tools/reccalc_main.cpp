// reccalc: best-choice calculus on the planar Poisson process.
//
// Subcommands: values | prob | simulate | dist | winrate | stoptime | verify.
// Structured output is CSV (default) or JSONL; reals carry 17 significant
// digits so identical invocations are byte-identical across runs and worker
// counts.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reccalc/optstop.hpp"
#include "reccalc/parallel.hpp"
#include "reccalc/recordlaw.hpp"
#include "reccalc/simulate.hpp"
#include "reccalc/specfun.hpp"
#include "reccalc/verify.hpp"

namespace {

namespace os = reccalc::optstop;
namespace rl = reccalc::recordlaw;
namespace sim = reccalc::sim;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Output {
  std::string format = "csv";  // csv | jsonl
  std::string path;            // empty = stdout
  std::ostream& stream() {
    if (!path.empty() && !file) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw CLI::ValidationError("--out", "cannot open " + path);
    }
    return file ? *file : std::cout;
  }
  std::unique_ptr<std::ofstream> file;
};

std::string fmt_real(double v, int digits = 17) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

double parse_area(const std::string& text) {
  if (text == "inf") return kInf;
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--t", "expected a real number or 'inf'");
  }
}

void emit_row(Output& out, const std::string& command,
              const std::vector<std::pair<std::string, std::string>>& params,
              const std::vector<std::pair<std::string, std::string>>& fields,
              bool& header_done) {
  auto& stream = out.stream();
  if (out.format == "jsonl") {
    nlohmann::json row;
    row["command"] = command;
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [k, v] : params) {
      p[k] = v;
      if (k == "seed") row["seed"] = std::stoull(v);
    }
    row["params"] = p;
    for (const auto& [k, v] : fields) {
      char* end = nullptr;
      const double num = std::strtod(v.c_str(), &end);
      if (end && *end == '\0' && !v.empty()) {
        row[k] = num;
      } else {
        row[k] = v;
      }
    }
    stream << row.dump() << "\n";
    return;
  }
  if (!header_done) {
    bool first = true;
    for (const auto& [k, v] : params) {
      (void)v;
      stream << (first ? "" : ",") << k;
      first = false;
    }
    for (const auto& [k, v] : fields) {
      (void)v;
      stream << (first ? "" : ",") << k;
      first = false;
    }
    stream << "\n";
    header_done = true;
  }
  bool first = true;
  for (const auto& [k, v] : params) {
    (void)k;
    stream << (first ? "" : ",") << v;
    first = false;
  }
  for (const auto& [k, v] : fields) {
    (void)k;
    stream << (first ? "" : ",") << v;
    first = false;
  }
  stream << "\n";
}

int cmd_values(Output& out, std::uint64_t seed) {
  (void)seed;
  bool header = false;
  const auto tf = os::solve_tF();
  const auto tp = os::solve_tP();
  const auto greedy = os::greedy_optimum();
  const std::vector<std::pair<std::string, double>> rows = {
      {"t_F", tf.root},
      {"v_F", os::value_FI(kInf)},
      {"t_P", tp.root},
      {"v_P", os::value_VC(kInf)},
      {"greedy_t", greedy.t_star},
      {"greedy_value", greedy.value},
  };
  for (const auto& [name, value] : rows) {
    emit_row(out, "values", {{"name", name}}, {{"value", fmt_real(value, 10)}},
             header);
  }
  return 0;
}

int cmd_prob(Output& out, const std::string& kind, double t, double s,
             bool has_s, int j) {
  double value = 0.0;
  if (kind == "p") {
    value = has_s ? rl::p_threshold_count(t, s, j) : rl::p_count(t, j);
  } else {
    value = has_s ? rl::q_threshold_count(t, s, j) : rl::q_count(t, j);
  }
  bool header = false;
  emit_row(out, "prob",
           {{"kind", kind},
            {"t", fmt_real(t)},
            {"s", has_s ? fmt_real(s) : ""},
            {"j", std::to_string(j)}},
           {{"value", fmt_real(value)}}, header);
  return 0;
}

double resolve_threshold(const std::string& text, const std::string& problem) {
  if (text == "optimal") {
    if (problem == "fi" || problem == "binpack") return os::t_F();
    return os::t_P();
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size() || !(v > 0.0)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--s", "expected a positive real or 'optimal'");
  }
}

int cmd_simulate(Output& out, const std::string& problem, double t,
                 const std::string& s_text, std::uint64_t n, std::uint64_t seed,
                 unsigned workers) {
  const double s = resolve_threshold(s_text, problem);
  sim::MCEstimate est;
  double analytic = std::nan("");
  if (problem == "fi") {
    est = sim::mc_policy_success(sim::Problem::FI, t, s, n, seed, workers);
    if (s == os::t_F()) analytic = os::value_FI(t);
  } else if (problem == "vc") {
    est = sim::mc_policy_success(sim::Problem::VC, t, s, n, seed, workers);
    if (s == os::t_P()) analytic = os::value_VC(t);
  } else if (problem == "hc") {
    est = sim::mc_policy_success(sim::Problem::HC, t, s, n, seed, workers);
    if (s == os::t_P()) analytic = os::value_HC(t);
  } else if (problem == "duration") {
    est = sim::mc_policy_reward(t, s, n, seed, workers);
    analytic = os::duration_value(t, s);
  } else if (problem == "binpack") {
    est = sim::mc_policy_success(sim::Problem::BinPack, t, s, n, seed, workers);
  } else if (problem == "horver") {
    const auto hv = sim::mc_horver(t, n, seed, workers);
    bool header = false;
    for (const auto& [name, e] :
         {std::pair<std::string, sim::MCEstimate>{"hor", hv.hor},
          {"ver", hv.ver},
          {"disagree", hv.disagree}}) {
      emit_row(out, "simulate",
               {{"problem", "horver." + name},
                {"t", fmt_real(t)},
                {"s", fmt_real(os::t_P())},
                {"n", std::to_string(n)},
                {"seed", std::to_string(seed)}},
               {{"value", fmt_real(e.mean)},
                {"std_error", fmt_real(e.std_error)}},
               header);
    }
    return 0;
  } else {
    throw CLI::ValidationError("problem", "unknown problem " + problem);
  }
  bool header = false;
  std::vector<std::pair<std::string, std::string>> fields = {
      {"value", fmt_real(est.mean)}, {"std_error", fmt_real(est.std_error)}};
  if (!std::isnan(analytic)) fields.push_back({"analytic", fmt_real(analytic)});
  emit_row(out, "simulate",
           {{"problem", problem},
            {"t", fmt_real(t)},
            {"s", fmt_real(s)},
            {"n", std::to_string(n)},
            {"seed", std::to_string(seed)}},
           fields, header);
  return 0;
}

int cmd_dist(Output& out, const std::string& kind, int k, std::uint64_t n,
             std::uint64_t seed, unsigned workers) {
  sim::EuKind eu;
  if (kind == "A") {
    eu = sim::EuKind::A;
  } else if (kind == "B") {
    eu = sim::EuKind::B;
  } else if (kind == "C") {
    eu = sim::EuKind::C;
  } else {
    throw CLI::ValidationError("kind", "expected A, B or C");
  }
  const auto samples = reccalc::parallel::mc_collect(
      n, seed, workers, [eu, k](reccalc::rng::Stream& rng, std::uint64_t) {
        return sim::sample_eu(eu, k, rng);
      });
  bool header = false;
  for (double v : samples) {
    emit_row(out, "dist",
             {{"kind", kind},
              {"k", std::to_string(k)},
              {"seed", std::to_string(seed)}},
             {{"value", fmt_real(v)}}, header);
  }
  return 0;
}

int cmd_winrate(Output& out, double s, int grid_points) {
  bool header = false;
  for (int i = 0; i <= grid_points; ++i) {
    const double xi = static_cast<double>(i) / grid_points;
    emit_row(out, "winrate", {{"s", fmt_real(s)}},
             {{"xi", fmt_real(xi)},
              {"density", fmt_real(os::win_rate_density(xi, s))}},
             header);
  }
  return 0;
}

int cmd_stoptime(Output& out, double t, double s, int grid_points) {
  bool header = false;
  for (int i = 0; i < grid_points; ++i) {
    const double xi = static_cast<double>(i) / grid_points;
    emit_row(out, "stoptime", {{"t", fmt_real(t)}, {"s", fmt_real(s)}},
             {{"xi", fmt_real(xi)},
              {"cdf", fmt_real(os::stop_time_cdf(t, xi, s))}},
             header);
  }
  return 0;
}

int cmd_verify(Output& out, const std::string& suite, std::uint64_t seed,
               unsigned workers) {
  const auto results = reccalc::verify::run_checks(suite, seed, workers);
  bool header = false;
  int failures = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failures;
    emit_row(out, "verify",
             {{"check", r.name}, {"suite", r.suite}},
             {{"mode", r.mode},
              {"measured", fmt_real(r.measured, 6)},
              {"threshold", fmt_real(r.threshold, 6)},
              {"result", r.passed ? "PASS" : "FAIL"},
              {"detail", r.detail}},
             header);
  }
  std::ostringstream summary;
  summary << (results.size() - failures) << "/" << results.size()
          << " checks passed";
  emit_row(out, "verify", {{"check", "summary"}, {"suite", suite}},
           {{"mode", ""},
            {"measured", ""},
            {"threshold", ""},
            {"result", failures == 0 ? "PASS" : "FAIL"},
            {"detail", summary.str()}},
           header);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-choice calculus on the planar Poisson process"};
  app.require_subcommand(1);

  Output out;
  std::uint64_t seed = 1;
  unsigned workers = reccalc::parallel::default_workers();
  app.add_option("--seed", seed, "Master seed for all randomness")
      ->envname("RECCALC_SEED");
  app.add_option("--workers", workers, "Worker threads for simulation");
  app.add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--out", out.path, "Output path (default stdout)");

  auto* values = app.add_subcommand("values", "Optimal thresholds and values");

  auto* prob = app.add_subcommand("prob", "Record-count probabilities");
  std::string prob_kind;
  std::string prob_t = "1";
  std::string prob_s;
  int prob_j = 0;
  prob->add_option("kind", prob_kind, "p or q")->required()
      ->check(CLI::IsMember({"p", "q"}));
  prob->add_option("--t", prob_t, "Rectangle area (or 'inf')")->required();
  prob->add_option("--s", prob_s, "Threshold; omit for the plain counts");
  prob->add_option("--j", prob_j, "Record count")->required()
      ->check(CLI::NonNegativeNumber);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo policy runs");
  std::string sim_problem, sim_t = "1", sim_s = "optimal";
  std::uint64_t sim_n = 100000;
  simulate->add_option("problem", sim_problem,
                       "fi | vc | hc | duration | binpack | horver")
      ->required()
      ->check(CLI::IsMember({"fi", "vc", "hc", "duration", "binpack",
                             "horver"}));
  simulate->add_option("--t", sim_t, "Area (or 'inf' for fi/vc)")->required();
  simulate->add_option("--s", sim_s, "Threshold or 'optimal'");
  simulate->add_option("--n", sim_n, "Number of trials")
      ->check(CLI::PositiveNumber);

  auto* dist = app.add_subcommand("dist", "Sample box-area representations");
  std::string dist_kind;
  int dist_k = 1;
  std::uint64_t dist_n = 1000;
  dist->add_option("kind", dist_kind, "A | B | C")->required();
  dist->add_option("--k", dist_k, "Entry index (k >= 1)")
      ->check(CLI::PositiveNumber);
  dist->add_option("--n", dist_n, "Number of samples")
      ->check(CLI::PositiveNumber);

  auto* winrate = app.add_subcommand("winrate", "Win-rate density curve");
  double wr_s = 0.0;
  int wr_grid = 100;
  winrate->add_option("--s", wr_s, "Threshold")->required()
      ->check(CLI::PositiveNumber);
  winrate->add_option("--grid-points", wr_grid, "Grid resolution")
      ->check(CLI::PositiveNumber);

  auto* stoptime = app.add_subcommand("stoptime", "Stop-coordinate CDF curve");
  std::string st_t = "inf";
  double st_s = 0.0;
  int st_grid = 100;
  stoptime->add_option("--t", st_t, "Depth bound (or 'inf')");
  stoptime->add_option("--s", st_s, "Threshold")->required()
      ->check(CLI::PositiveNumber);
  stoptime->add_option("--grid-points", st_grid, "Grid resolution")
      ->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  std::string verify_suite = "all";
  verify->add_option("--suite", verify_suite, "all | identities | mc")
      ->check(CLI::IsMember({"all", "identities", "mc"}));

  for (auto* sub : {values, prob, simulate, dist, winrate, stoptime, verify}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (values->parsed()) return cmd_values(out, seed);
    if (prob->parsed()) {
      return cmd_prob(out, prob_kind, parse_area(prob_t),
                      prob_s.empty() ? 0.0 : parse_area(prob_s),
                      !prob_s.empty(), prob_j);
    }
    if (simulate->parsed()) {
      return cmd_simulate(out, sim_problem, parse_area(sim_t), sim_s, sim_n,
                          seed, workers);
    }
    if (dist->parsed()) {
      return cmd_dist(out, dist_kind, dist_k, dist_n, seed, workers);
    }
    if (winrate->parsed()) return cmd_winrate(out, wr_s, wr_grid);
    if (stoptime->parsed()) {
      return cmd_stoptime(out, parse_area(st_t), st_s, st_grid);
    }
    if (verify->parsed()) return cmd_verify(out, verify_suite, seed, workers);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
