#include "edgeplace/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "edgeplace/baselines.hpp"
#include "edgeplace/bounds.hpp"
#include "edgeplace/errors.hpp"

namespace edgeplace {

namespace {

constexpr std::uint64_t kEnvironmentTag = 0x454e56ULL;
constexpr std::uint64_t kPolicyTag = 0x504f4cULL;
constexpr std::uint64_t kIdTag = 0x4944ULL;

constexpr std::array<std::pair<PolicyKind, std::string_view>, 9> kPolicyNames{{
    {PolicyKind::markov, "markov"},
    {PolicyKind::best_response, "best_response"},
    {PolicyKind::brute_force, "brute_force"},
    {PolicyKind::am, "am"},
    {PolicyKind::nm, "nm"},
    {PolicyKind::gm, "gm"},
    {PolicyKind::grk, "grk"},
    {PolicyKind::gk, "gk"},
    {PolicyKind::fmec, "fmec"},
}};

std::uint64_t digest_step(std::uint64_t h, std::uint64_t x) {
  return mix64(h ^ (x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

std::uint64_t digest_step(std::uint64_t h, double x) {
  return digest_step(h, std::bit_cast<std::uint64_t>(x));
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
  for (const auto& [k, name] : kPolicyNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kPolicyNames)
    if (n == name) return k;
  return std::nullopt;
}

bool policy_needs_k(PolicyKind kind) {
  return kind == PolicyKind::grk || kind == PolicyKind::gk;
}

std::string policy_label(const Policy& policy) {
  if (policy_needs_k(policy.kind))
    return fmt::format("{}({})", to_string(policy.kind), policy.k);
  return std::string(to_string(policy.kind));
}

void Scenario::validate() const {
  if (map.width_cells < 1) throw ConfigError("grid.width", "must be >= 1");
  if (map.height_cells < 1) throw ConfigError("grid.height", "must be >= 1");
  if (!(map.cell_size_m > 0.0)) throw ConfigError("grid.cell_m", "must be > 0");
  if (!(map.hop_delay_s >= 0.0)) throw ConfigError("grid.hop_delay_s", "must be >= 0");
  if (!(node_capacity > 0.0)) throw ConfigError("node.capacity", "must be > 0");
  if (users < 1) throw ConfigError("users.count", "must be >= 1");
  if (!(mobility.pedestrian_fraction >= 0.0 && mobility.pedestrian_fraction <= 1.0))
    throw ConfigError("users.pedestrian_fraction", "must lie in [0, 1]");
  if (horizon < 1) throw ConfigError("horizon", "must be >= 1");
  if (!(v >= 0.0)) throw ConfigError("v", "must be >= 0");
  if (!(e_avg > 0.0)) throw ConfigError("e_avg", "must be > 0");
  if (!(beta > 0.0)) throw ConfigError("beta", "must be > 0");
  if (policy_needs_k(policy.kind) && policy.k > users)
    throw ConfigError("policy.k", "must not exceed users.count");
  try {
    mobility.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("mobility", e.what());
  }
}

double Scenario::e_max() const {
  return worst_case_slot_migration(map, users,
                                   demand.max_cycles() / demand.reference_cycles());
}

std::size_t Scenario::chain_iterations() const {
  return markov_iterations.value_or(default_markov_iterations(users, map.node_count()));
}

Scenario Scenario::paper_default() { return Scenario{}; }

Scenario Scenario::desk_preset() {
  Scenario s;
  s.map.width_cells = 3;
  s.map.height_cells = 3;
  s.users = 30;
  s.horizon = 500;
  s.e_avg = 202.5 * 30.0 / 315.0;
  s.v = 30.0;
  return s;
}

namespace {

class Engine {
 public:
  Engine(const Scenario& sc, PositionSource& source)
      : sc_(sc),
        source_(source),
        nodes_(make_nodes(sc.map, sc.node_capacity)),
        capacities_(nodes_.size(), sc.node_capacity),
        params_(sc.params()) {
    if (source_.users() != sc.users)
      throw std::invalid_argument(fmt::format("position source has {} users, scenario {}",
                                              source_.users(), sc.users));
    // Users update in ascending order of a random ID drawn once per run.
    order_.resize(sc.users);
    std::iota(order_.begin(), order_.end(), UserId{0});
    SplitMix64 ids = derive_stream(sc.seed, kIdTag);
    for (std::size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[ids.below(i)]);
  }

  MetricsSeries run(const RunOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    MetricsSeries series;
    series.policy = sc_.policy;
    series.v = sc_.v;
    series.e_avg = sc_.e_avg;
    series.seed = sc_.seed;
    series.users = sc_.users;
    series.nodes = nodes_.size();
    series.params = params_;
    series.records.reserve(sc_.horizon);

    std::vector<Point> previous_positions = source_.next();
    std::vector<NodeId> attach(sc_.users);
    for (UserId k = 0; k < sc_.users; ++k)
      attach[k] = attachment_node(previous_positions[k], sc_.map);
    const PlacementProfile initial = baseline_always_nearest(attach);
    PlacementProfile previous = initial;
    double queue = 0.0;
    double latency_sum = 0.0, migration_sum = 0.0, queue_sum = 0.0;

    for (std::size_t t = 1; t <= sc_.horizon; ++t) {
      const std::vector<Point> positions = source_.next();
      std::vector<Cell> cells(sc_.users);
      for (UserId k = 0; k < sc_.users; ++k) {
        cells[k] = attachment_cell(positions[k], sc_.map);
        attach[k] = sc_.map.node_at(cells[k]);
      }

      SplitMix64 env = derive_stream(sc_.seed, kEnvironmentTag, t);
      std::vector<double> demands(sc_.users), comm_u(sc_.users), mig_u(sc_.users);
      for (auto& r : demands)
        r = env.uniform(sc_.demand.rate_min_bps, sc_.demand.rate_max_bps) *
            sc_.demand.cycles_per_bit;
      for (auto& u : comm_u) u = draw_perturbation(env);
      for (auto& u : mig_u) u = draw_perturbation(env);

      std::uint64_t digest = t;
      for (UserId k = 0; k < sc_.users; ++k) {
        digest = digest_step(digest, static_cast<std::uint64_t>(attach[k]));
        digest = digest_step(digest, demands[k]);
        digest = digest_step(digest, comm_u[k]);
        digest = digest_step(digest, mig_u[k]);
      }

      SlotProblem problem(build_cost_matrices(sc_.map, cells, demands, comm_u, mig_u,
                                              sc_.demand.reference_cycles()),
                          demands, capacities_, previous, queue, params_);

      SolverStats stats;
      PlacementProfile chosen =
          decide(problem, t, attach, initial, positions, previous_positions, comm_u, stats);

      SlotRecord rec;
      rec.t = t;
      rec.delays = delay_breakdown(chosen, demands, nodes_, problem.matrices());
      for (const auto& d : rec.delays) rec.sum_latency_s += d.total_s;
      rec.avg_latency_s = rec.sum_latency_s / static_cast<double>(sc_.users);
      rec.migration_cost = slot_migration_cost(previous, chosen, problem.matrices());
      rec.queue_before = queue;
      rec.queue_after = queue_update(queue, rec.migration_cost, sc_.e_avg);
      rec.objective = slot_objective(chosen, problem);
      rec.stats = stats;
      rec.input_digest = digest;

      latency_sum += rec.avg_latency_s;
      migration_sum += rec.migration_cost;
      queue_sum += rec.queue_after;
      const auto n = static_cast<double>(t);
      rec.running_avg_latency_s = latency_sum / n;
      rec.running_avg_migration_cost = migration_sum / n;
      rec.running_avg_queue = queue_sum / n;

      if (options.observer) options.observer(SlotContext{t, problem, chosen, positions});

      queue = rec.queue_after;
      previous = std::move(chosen);
      previous_positions = positions;
      series.records.push_back(std::move(rec));
    }
    if (options.measure_time)
      series.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return series;
  }

 private:
  PlacementProfile random_profile(SplitMix64& rng) const {
    PlacementProfile p(sc_.users, 0);
    for (UserId k = 0; k < sc_.users; ++k) p[k] = rng.below(nodes_.size());
    return p;
  }

  PlacementProfile decide(const SlotProblem& problem, std::size_t t,
                          const std::vector<NodeId>& attach, const PlacementProfile& initial,
                          const std::vector<Point>& positions,
                          const std::vector<Point>& previous_positions,
                          const std::vector<double>& comm_u, SolverStats& stats) {
    SplitMix64 rng = derive_stream(sc_.seed, kPolicyTag, t);
    switch (sc_.policy.kind) {
      case PolicyKind::markov: {
        const MarkovConfig cfg{sc_.beta, sc_.chain_iterations(), rng()};
        auto result = markov_search(problem, cfg, random_profile(rng));
        stats = result.stats;
        return std::move(result.profile);
      }
      case PolicyKind::best_response: {
        auto [result, cert] = best_response_search(problem, random_profile(rng), order_);
        if (!cert.is_nash)
          throw InvariantViolation(fmt::format("slot {}: best response ended off equilibrium", t));
        stats = result.stats;
        return std::move(result.profile);
      }
      case PolicyKind::brute_force: {
        auto result = brute_force_solve(problem, sc_.enumeration_cap);
        stats = result.stats;
        return std::move(result.profile);
      }
      case PolicyKind::am:
      case PolicyKind::gm:
        return baseline_always_nearest(attach);
      case PolicyKind::nm:
        return baseline_no_migration(initial);
      case PolicyKind::grk:
        return baseline_greedy_k(problem, sc_.policy.k, GreedyOrder::random, rng);
      case PolicyKind::gk:
        return baseline_greedy_k(problem, sc_.policy.k, GreedyOrder::descending_latency, rng);
      case PolicyKind::fmec: {
        std::vector<Point> velocity(sc_.users);
        const double dt = sc_.mobility.slot_length_s;
        for (UserId k = 0; k < sc_.users; ++k)
          velocity[k] = {(positions[k].x - previous_positions[k].x) / dt,
                         (positions[k].y - previous_positions[k].y) / dt};
        return baseline_fmec(problem, FmecInputs{sc_.map, positions, velocity, dt, comm_u});
      }
    }
    throw std::logic_error("unhandled policy");
  }

  const Scenario& sc_;
  PositionSource& source_;
  std::vector<MecNode> nodes_;
  std::vector<double> capacities_;
  LyapunovParams params_;
  std::vector<UserId> order_;
};

}  // namespace

MetricsSeries run(const Scenario& scenario, PositionSource& positions,
                  const RunOptions& options) {
  scenario.validate();
  return Engine(scenario, positions).run(options);
}

MetricsSeries run(const Scenario& scenario, const RunOptions& options) {
  scenario.validate();
  if (scenario.trace_path) {
    Trace trace = load_trace(*scenario.trace_path, scenario.map);
    if (trace.horizon < scenario.horizon + 1)
      throw ConfigError("trace_path", fmt::format("trace covers {} slots, run needs {}",
                                                  trace.horizon, scenario.horizon + 1));
    if (trace.users != scenario.users)
      throw ConfigError("trace_path", fmt::format("trace has {} users, users.count is {}",
                                                  trace.users, scenario.users));
    TraceMobility source(std::move(trace));
    return Engine(scenario, source).run(options);
  }
  SyntheticMobility source(scenario.users, scenario.map, scenario.mobility, scenario.seed);
  return Engine(scenario, source).run(options);
}

SlotProblem sample_slot_problem(const Scenario& sc, SplitMix64& rng) {
  const std::size_t n = sc.users, m = sc.map.node_count();
  std::vector<Cell> cells(n);
  for (auto& c : cells)
    c = attachment_cell({rng.uniform(0.0, sc.map.width_m()), rng.uniform(0.0, sc.map.height_m())},
                        sc.map);
  std::vector<double> demands(n), comm_u(n), mig_u(n);
  for (auto& r : demands)
    r = rng.uniform(sc.demand.rate_min_bps, sc.demand.rate_max_bps) * sc.demand.cycles_per_bit;
  for (auto& u : comm_u) u = draw_perturbation(rng);
  for (auto& u : mig_u) u = draw_perturbation(rng);
  PlacementProfile previous(n, 0);
  for (UserId k = 0; k < n; ++k) previous[k] = rng.below(m);
  const double queue = rng.uniform(0.0, 2.0 * sc.e_avg);
  SlotCostMatrices matrices =
      build_cost_matrices(sc.map, cells, demands, comm_u, mig_u, sc.demand.reference_cycles());
  return SlotProblem(std::move(matrices), std::move(demands), std::vector<double>(m, sc.node_capacity),
                     std::move(previous), queue, sc.params());
}

RunSummary summarize(const MetricsSeries& series) {
  if (series.records.empty()) throw std::invalid_argument("empty metrics series");
  RunSummary s;
  s.policy = policy_label(series.policy);
  s.v = series.v;
  s.e_avg = series.e_avg;
  s.seed = series.seed;
  double latency = 0.0, migration = 0.0, queue = 0.0;
  for (const auto& r : series.records) {
    latency += r.avg_latency_s;
    migration += r.migration_cost;
    queue += r.queue_after;
  }
  const auto n = static_cast<double>(series.records.size());
  s.avg_latency_s = latency / n;
  s.avg_migration_cost = migration / n;
  s.avg_queue = queue / n;
  s.final_queue = series.records.back().queue_after;
  s.wall_time_s = series.wall_time_s;
  return s;
}

std::vector<MetricsSeries> sweep_runs(const Scenario& scenario, std::span<const double> v_values,
                                      const RunOptions& options) {
  if (v_values.size() < 2) throw std::invalid_argument("a sweep needs at least two V values");
  std::vector<MetricsSeries> out;
  for (double v : v_values) {
    Scenario s = scenario;
    s.v = v;
    out.push_back(run(s, options));
  }
  return out;
}

std::vector<RunSummary> sweep_v(const Scenario& scenario, std::span<const double> v_values,
                                const RunOptions& options) {
  std::vector<RunSummary> out;
  for (const auto& series : sweep_runs(scenario, v_values, options))
    out.push_back(summarize(series));
  return out;
}

LatencyBoundReport latency_bound_check(const Scenario& scenario) {
  if (!(scenario.v > 0.0)) throw std::invalid_argument("latency bound check needs V > 0");
  profile_count(scenario.users, scenario.map.node_count(), scenario.enumeration_cap);

  LatencyBoundReport rep;
  rep.v = scenario.v;
  rep.beta = scenario.beta;
  rep.b = scenario.params().b;
  rep.log_profiles = static_cast<double>(scenario.users) *
                     std::log(static_cast<double>(scenario.map.node_count()));

  double proxy_sum = 0.0;
  Scenario ca = scenario;
  ca.policy = {PolicyKind::markov, 0};
  RunOptions with_proxy;
  with_proxy.observer = [&](const SlotContext& ctx) {
    const SlotProblem pure = ctx.problem.latency_only();
    const auto best = brute_force_solve(pure, scenario.enumeration_cap);
    proxy_sum += sum_latency(best.profile, pure);
  };
  const MetricsSeries ca_series = run(ca, with_proxy);

  std::optional<CostExtremes> extremes;
  std::optional<SlotProblem> last;
  Scenario da = scenario;
  da.policy = {PolicyKind::best_response, 0};
  RunOptions with_extremes;
  with_extremes.observer = [&](const SlotContext& ctx) {
    auto e = CostExtremes::of(ctx.problem);
    if (extremes)
      extremes->merge(e);
    else
      extremes = std::move(e);
    last.emplace(ctx.problem);
  };
  const MetricsSeries da_series = run(da, with_extremes);

  const auto slots = static_cast<double>(scenario.horizon);
  const auto mean_sum_latency = [&](const MetricsSeries& s) {
    double total = 0.0;
    for (const auto& r : s.records) total += r.sum_latency_s;
    return total / slots;
  };
  rep.slots = scenario.horizon;
  rep.optimum_proxy = proxy_sum / slots;
  rep.markov_realized = mean_sum_latency(ca_series);
  rep.markov_bound =
      rep.optimum_proxy + rep.b / rep.v + rep.log_profiles / (rep.beta * rep.v);
  rep.markov_within = rep.markov_realized <= rep.markov_bound + kInequalitySlack;
  rep.ratio_bound = std::max(1.0, approximation_ratio_bound(*last, *extremes));
  rep.best_response_realized = mean_sum_latency(da_series);
  rep.best_response_bound = rep.ratio_bound * rep.optimum_proxy + rep.b / rep.v;
  rep.best_response_within =
      rep.best_response_realized <= rep.best_response_bound + kInequalitySlack;
  return rep;
}

QueueBoundReport queue_bound_check(const MetricsSeries& series, std::optional<double> threshold) {
  if (series.records.empty()) throw std::invalid_argument("empty metrics series");
  QueueBoundReport rep;
  rep.horizon = series.records.size();
  rep.e_avg = series.e_avg;
  rep.threshold = threshold.value_or(0.05 * series.e_avg);
  double queue_total = 0.0, migration_total = 0.0;
  rep.lemma1_all_slots = true;
  rep.e_max_respected = true;
  for (const auto& r : series.records) {
    queue_total += r.queue_after;
    migration_total += r.migration_cost;
    if (!lemma1_pathwise_check(r.queue_before, r.queue_after, r.migration_cost,
                               r.sum_latency_s, series.params))
      rep.lemma1_all_slots = false;
    if (r.migration_cost > series.params.e_max) rep.e_max_respected = false;
  }
  const auto t = static_cast<double>(rep.horizon);
  rep.avg_queue = queue_total / t;
  rep.final_queue = series.records.back().queue_after;
  rep.final_queue_per_slot = rep.final_queue / t;
  rep.queue_small = rep.final_queue_per_slot <= rep.threshold;
  rep.avg_migration_cost = migration_total / t;
  const double budget = t * series.e_avg + rep.final_queue;
  rep.budget_identity_holds =
      migration_total <= budget + kInequalitySlack * std::max(1.0, budget);
  return rep;
}

void write_metrics_csv(std::ostream& out, const MetricsSeries& series) {
  fmt::print(out, "{}\n", kMetricsHeader);
  for (const auto& r : series.records)
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", r.t, r.sum_latency_s, r.avg_latency_s,
               r.migration_cost, r.queue_after, r.objective, r.stats.moves,
               r.stats.iterations);
}

void write_summary_csv(std::ostream& out, std::span<const RunSummary> summaries) {
  fmt::print(out, "{}\n", kSummaryHeader);
  for (const auto& s : summaries)
    fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", s.policy, s.v, s.e_avg, s.seed,
               s.avg_latency_s, s.avg_migration_cost, s.avg_queue, s.final_queue,
               s.wall_time_s);
}

std::string format_latency_report(const LatencyBoundReport& r) {
  return fmt::format(
      "latency bounds over {} slots (V = {}, beta = {}, B = {})\n"
      "  per-slot optimum proxy (sum latency, s): {}\n"
      "  markov: realized {} <= proxy + B/V + ln|profiles|/(beta V) = {} : {}\n"
      "  best_response: realized {} <= mu * proxy + B/V = {} (mu bound {}) : {}\n",
      r.slots, r.v, r.beta, r.b, r.optimum_proxy, r.markov_realized, r.markov_bound,
      r.markov_within ? "ok" : "VIOLATED", r.best_response_realized, r.best_response_bound,
      r.ratio_bound, r.best_response_within ? "ok" : "VIOLATED");
}

std::string format_queue_report(const QueueBoundReport& r) {
  return fmt::format(
      "queue over {} slots (E_avg = {})\n"
      "  average queue: {}\n"
      "  final queue: {} (Q(T)/T = {}, threshold {}) : {}\n"
      "  average migration cost: {} ; sum E <= T E_avg + Q(T) : {}\n"
      "  drift bound on every slot : {}\n"
      "  E(t) <= E_max on every slot : {}\n",
      r.horizon, r.e_avg, r.avg_queue, r.final_queue, r.final_queue_per_slot, r.threshold,
      r.queue_small ? "ok" : "above threshold", r.avg_migration_cost,
      r.budget_identity_holds ? "ok" : "VIOLATED", r.lemma1_all_slots ? "ok" : "VIOLATED",
      r.e_max_respected ? "ok" : "VIOLATED");
}

}  // namespace edgeplace
