#include "edgeplace/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "edgeplace/bounds.hpp"
#include "edgeplace/config.hpp"
#include "edgeplace/errors.hpp"
#include "edgeplace/simulator.hpp"
#include "edgeplace/solvers.hpp"

namespace edgeplace {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kOracleTag = 0x4f5241434c45ULL;

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

// A bound the command promised to verify did not hold.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Scenario load_scenario(const Common& c) {
  Scenario s;
  if (c.config_path.empty()) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& o : c.overrides) apply_override(doc, o);
    s = scenario_from_json(doc);
  } else {
    s = parse_config(c.config_path, c.overrides);
  }
  if (c.seed) s.seed = *c.seed;
  return s;
}

fs::path prepare_out(const Common& c) {
  const fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("cannot create output directory " + dir.string());
  return dir;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

void write_text(const fs::path& dir, const std::string& name, const std::string& text) {
  auto out = open_output(dir, name);
  out << text;
}

RunOptions run_options(const Common& c) {
  RunOptions o;
  o.measure_time = c.timing;
  return o;
}

int cmd_simulate(const Common& c, std::ostream& out) {
  const Scenario s = load_scenario(c);
  const fs::path dir = prepare_out(c);
  const MetricsSeries series = run(s, run_options(c));
  const RunSummary summary = summarize(series);
  {
    auto f = open_output(dir, "metrics.csv");
    write_metrics_csv(f, series);
  }
  {
    auto f = open_output(dir, "summary.csv");
    write_summary_csv(f, std::span(&summary, 1));
  }
  const std::string report = format_queue_report(queue_bound_check(series));
  write_text(dir, "queue_report.txt", report);
  fmt::print(out, "{}: avg latency {} s, avg migration cost {}, final queue {}\n",
             summary.policy, summary.avg_latency_s, summary.avg_migration_cost,
             summary.final_queue);
  return kExitOk;
}

int cmd_sweep(const Common& c, const std::vector<double>& v_values, std::ostream& out) {
  const Scenario s = load_scenario(c);
  for (double v : v_values)
    if (!(v >= 0.0)) throw ConfigError("--v", "values must be >= 0");
  if (v_values.size() < 2) throw ConfigError("--v", "a sweep needs at least two values");
  const fs::path dir = prepare_out(c);
  const auto runs = sweep_runs(s, v_values, run_options(c));
  std::vector<RunSummary> summaries;
  std::string report;
  for (const auto& series : runs) {
    summaries.push_back(summarize(series));
    auto f = open_output(dir, fmt::format("metrics_v{}.csv", series.v));
    write_metrics_csv(f, series);
    report += fmt::format("V = {}\n", series.v) + format_queue_report(queue_bound_check(series));
  }
  {
    auto f = open_output(dir, "summary.csv");
    write_summary_csv(f, summaries);
  }
  write_text(dir, "queue_report.txt", report);
  for (const auto& sm : summaries)
    fmt::print(out, "V = {}: avg latency {} s, avg queue {}\n", sm.v, sm.avg_latency_s,
               sm.avg_queue);
  return kExitOk;
}

int cmd_oracle_check(const Common& c, std::size_t instances, std::ostream& out) {
  const Scenario s = load_scenario(c);
  if (instances < 1) throw ConfigError("--instances", "must be >= 1");
  const std::size_t n = s.users, m = s.map.node_count();
  const std::uint64_t profiles = profile_count(n, m, s.enumeration_cap);
  const fs::path dir = prepare_out(c);

  auto csv = open_output(dir, "oracle.csv");
  fmt::print(csv,
             "instance,optimum,markov_expected,markov_gap,markov_gap_bound,markov_sampled,"
             "br_objective,br_moves,br_move_bound,br_ratio,br_ratio_bound,nash,ok\n");
  const double gap_bound = markov_gap_bound(s.beta, m, n);
  const std::size_t move_bound = best_response_move_bound(m, n);
  std::size_t failures = 0;
  double worst_gap = 0.0, worst_ratio = 1.0;
  for (std::size_t i = 0; i < instances; ++i) {
    SplitMix64 rng = derive_stream(s.seed, kOracleTag, i);
    const SlotProblem problem = sample_slot_problem(s, rng);
    const SolveResult opt = brute_force_solve(problem, s.enumeration_cap);
    const double expected = stationary_expected_objective(problem, s.beta, s.enumeration_cap);
    const double gap = expected - opt.objective;
    const double slack = kInequalitySlack * std::max(1.0, std::abs(opt.objective));
    const SolveResult sampled =
        markov_search(problem, MarkovConfig{s.beta, s.chain_iterations(), rng()});
    PlacementProfile start(n, 0);
    for (UserId k = 0; k < n; ++k) start[k] = rng.below(m);
    const auto [br, cert] = best_response_search(problem, start);
    const double ratio = br.objective / opt.objective;
    const double ratio_bound = approximation_ratio_bound(problem, CostExtremes::of(problem));
    const bool ok = gap >= -slack && gap <= gap_bound + slack &&
                    opt.objective <= sampled.objective + slack && cert.is_nash &&
                    cert.total_moves <= move_bound && ratio <= ratio_bound + kInequalitySlack;
    if (!ok) ++failures;
    worst_gap = std::max(worst_gap, gap);
    worst_ratio = std::max(worst_ratio, ratio);
    fmt::print(csv, "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", i, opt.objective, expected, gap,
               gap_bound, sampled.objective, br.objective, cert.total_moves, move_bound, ratio,
               ratio_bound, cert.is_nash ? 1 : 0, ok ? 1 : 0);
  }
  csv.close();

  const std::string report = fmt::format(
      "oracle check: {} instances, N = {}, M = {}, {} profiles, beta = {}\n"
      "  markov: stationary expected cost - optimum in [0, ln({})/beta = {}], worst gap {}\n"
      "  best response: Nash at termination, moves <= M N (N + 1) / 2 = {}, "
      "cost / optimum <= ratio bound, worst ratio {}\n"
      "  failed instances: {}\n",
      instances, n, m, profiles, s.beta, profiles, gap_bound, worst_gap, move_bound, worst_ratio,
      failures);
  write_text(dir, "oracle_report.txt", report);
  out << report;
  if (failures > 0) throw CheckFailed(fmt::format("{} oracle instances failed", failures));
  return kExitOk;
}

int cmd_bounds_check(const Common& c, std::ostream& out) {
  const Scenario s = load_scenario(c);
  const fs::path dir = prepare_out(c);
  std::string report;
  bool hard_ok = true;
  std::vector<RunSummary> summaries;

  for (PolicyKind kind : {PolicyKind::markov, PolicyKind::best_response}) {
    Scenario sc = s;
    sc.policy = {kind, 0};
    std::size_t lemma2_violations = 0;
    RunOptions opts = run_options(c);
    if (kind == PolicyKind::best_response)
      opts.observer = [&](const SlotContext& ctx) {
        const CostExtremes e = CostExtremes::of(ctx.problem);
        for (UserId k = 0; k < ctx.problem.users(); ++k) {
          const double own = user_cost(k, ctx.chosen, ctx.problem);
          const double bound = per_user_cost_bound(k, ctx.problem, e);
          if (own > bound + kInequalitySlack * std::max(1.0, bound)) ++lemma2_violations;
        }
      };
    const MetricsSeries series = run(sc, opts);
    summaries.push_back(summarize(series));
    {
      auto f = open_output(dir, fmt::format("metrics_{}.csv", to_string(kind)));
      write_metrics_csv(f, series);
    }
    const QueueBoundReport q = queue_bound_check(series);
    hard_ok = hard_ok && q.budget_identity_holds && q.lemma1_all_slots && q.e_max_respected;
    report += fmt::format("[{}]\n", to_string(kind)) + format_queue_report(q);
    if (kind == PolicyKind::best_response) {
      report += fmt::format("  equilibrium cost <= per-user bound on every user and slot : {}\n",
                            lemma2_violations == 0 ? "ok" : "VIOLATED");
      hard_ok = hard_ok && lemma2_violations == 0;
    }
  }

  bool small = true;
  try {
    profile_count(s.users, s.map.node_count(), s.enumeration_cap);
  } catch (const SizeCapError&) {
    small = false;
  }
  if (small) {
    const LatencyBoundReport lat = latency_bound_check(s);
    report += format_latency_report(lat);
    hard_ok = hard_ok && lat.markov_within && lat.best_response_within;
  } else {
    report += fmt::format(
        "latency bounds: skipped, {}^{} profiles exceed the enumeration cap of {}\n",
        s.map.node_count(), s.users, s.enumeration_cap);
  }

  {
    auto f = open_output(dir, "summary.csv");
    write_summary_csv(f, summaries);
  }
  write_text(dir, "bounds_report.txt", report);
  out << report;
  if (!hard_ok) throw CheckFailed("a bound was violated; see bounds_report.txt");
  return kExitOk;
}

std::pair<std::size_t, std::size_t> parse_density(const std::string& text) {
  const auto x = text.find('x');
  std::size_t w = 0, h = 0;
  if (x != std::string::npos) {
    try {
      std::size_t used = 0;
      w = std::stoul(text.substr(0, x), &used);
      if (used != x) w = 0;
      const std::string rest = text.substr(x + 1);
      h = std::stoul(rest, &used);
      if (used != rest.size()) h = 0;
    } catch (const std::exception&) {
      w = h = 0;
    }
  }
  if (w == 0 || h == 0) throw ConfigError("--densities", "expected WxH, got '" + text + "'");
  return {w, h};
}

int cmd_compare(const Common& c, const std::vector<std::string>& densities, std::ostream& out) {
  const Scenario base = load_scenario(c);
  std::vector<std::pair<std::size_t, std::size_t>> grids;
  for (const auto& d : densities) grids.push_back(parse_density(d));
  if (grids.empty()) grids.emplace_back(base.map.width_cells, base.map.height_cells);
  const fs::path dir = prepare_out(c);

  const std::size_t k = policy_needs_k(base.policy.kind)
                            ? base.policy.k
                            : (base.users + 2) / 3;
  const std::vector<Policy> policies{
      {PolicyKind::markov, 0}, {PolicyKind::best_response, 0}, {PolicyKind::am, 0},
      {PolicyKind::nm, 0},     {PolicyKind::gm, 0},            {PolicyKind::grk, k},
      {PolicyKind::gk, k},     {PolicyKind::fmec, 0},
  };

  auto density_csv = open_output(dir, "density.csv");
  fmt::print(density_csv, "nodes,grid,policy,avg_latency_s,avg_migration_cost,avg_queue\n");
  auto time_csv = open_output(dir, "running_time.csv");
  fmt::print(time_csv, "nodes,grid,policy,solver_evals,wall_time_s\n");
  std::vector<RunSummary> first_grid;
  for (std::size_t g = 0; g < grids.size(); ++g) {
    Scenario s = base;
    s.map.width_cells = grids[g].first;
    s.map.height_cells = grids[g].second;
    const std::string label = fmt::format("{}x{}", grids[g].first, grids[g].second);
    for (const auto& p : policies) {
      s.policy = p;
      const MetricsSeries series = run(s, run_options(c));
      const RunSummary sm = summarize(series);
      std::size_t evals = 0;
      for (const auto& r : series.records) evals += r.stats.evaluations;
      fmt::print(density_csv, "{},{},{},{},{},{}\n", s.map.node_count(), label, sm.policy,
                 sm.avg_latency_s, sm.avg_migration_cost, sm.avg_queue);
      fmt::print(time_csv, "{},{},{},{},{}\n", s.map.node_count(), label, sm.policy, evals,
                 sm.wall_time_s);
      fmt::print(out, "{} {}: avg latency {} s, avg migration cost {}\n", label, sm.policy,
                 sm.avg_latency_s, sm.avg_migration_cost);
      if (g == 0) first_grid.push_back(sm);
    }
  }
  auto f = open_output(dir, "summary.csv");
  write_summary_csv(f, first_grid);
  return kExitOk;
}

void error_line(std::ostream& err, std::string_view kind, const std::string& message,
                const std::string& key = {}) {
  nlohmann::json line = {{"status", "error"}, {"kind", kind}, {"message", message}};
  if (!key.empty()) line["key"] = key;
  err << line.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online edge service placement simulator", "edgeplace"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--config", common.config_path, "Flat JSON scenario file");
  app.add_option("--out", common.out_dir, "Output directory");
  app.add_option("--set", common.overrides, "Override a config key (key=value)")
      ->allow_extra_args(false);
  app.add_option("--seed", common.seed, "Override the seed");
  app.add_flag("--timing", common.timing, "Record wall-clock run time in summaries");

  auto* simulate = app.add_subcommand("simulate", "Run one scenario");
  std::vector<double> v_values;
  auto* sweep = app.add_subcommand("sweep", "Run the scenario for several V values");
  sweep->add_option("--v", v_values, "Comma-separated V values")->delimiter(',')->required();
  std::size_t instances = 50;
  auto* oracle = app.add_subcommand("oracle-check", "Compare solvers with brute force");
  oracle->add_option("--instances", instances, "Random instances to check");
  auto* bounds = app.add_subcommand("bounds-check", "Queue, drift and latency bound reports");
  std::vector<std::string> densities;
  auto* compare = app.add_subcommand("compare", "All policies on common random numbers");
  compare->add_option("--densities", densities, "Grid sizes such as 3x3,4x4")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", e.what());
    return kExitConfigError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(common, out);
    if (sweep->parsed()) return cmd_sweep(common, v_values, out);
    if (oracle->parsed()) return cmd_oracle_check(common, instances, out);
    if (bounds->parsed()) return cmd_bounds_check(common, out);
    if (compare->parsed()) return cmd_compare(common, densities, out);
  } catch (const ConfigError& e) {
    error_line(err, "config", e.what(), e.key());
    return kExitConfigError;
  } catch (const TraceParseError& e) {
    error_line(err, "trace", e.what(), "trace_path");
    return kExitConfigError;
  } catch (const CheckFailed& e) {
    error_line(err, "check", e.what());
    return kExitRuntimeError;
  } catch (const std::exception& e) {
    error_line(err, "runtime", e.what());
    return kExitRuntimeError;
  }
  error_line(err, "usage", "no command given");
  return kExitConfigError;
}

}  // namespace edgeplace
