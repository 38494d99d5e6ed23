#pragma once

// Online placement loop: per slot, build the slot problem, let the policy
// decide, charge migration, record latency and update the virtual queue.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgeplace/lyapunov.hpp"
#include "edgeplace/mobility.hpp"
#include "edgeplace/model.hpp"
#include "edgeplace/solvers.hpp"

namespace edgeplace {

enum class PolicyKind { markov, best_response, brute_force, am, nm, gm, grk, gk, fmec };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);
/// grk and gk need a K.
bool policy_needs_k(PolicyKind kind);

struct Policy {
  PolicyKind kind = PolicyKind::best_response;
  std::size_t k = 0;
  bool operator==(const Policy&) const = default;
};

/// Label used in CSV output, e.g. "markov" or "gk(8)".
std::string policy_label(const Policy& policy);

struct Scenario {
  GridMap map;
  double node_capacity = 25e9;
  std::size_t users = 315;
  MobilityConfig mobility;
  DemandModel demand;
  std::size_t horizon = 2000;
  double v = 1000.0;
  double e_avg = 202.5;
  double beta = 0.1;
  Policy policy;
  std::uint64_t seed = 1;
  std::optional<std::string> trace_path;
  std::optional<std::size_t> markov_iterations;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;

  bool operator==(const Scenario&) const = default;

  /// Throws ConfigError naming the offending config key.
  void validate() const;

  /// Worst-case slot migration cost, fixed before the run.
  double e_max() const;
  LyapunovParams params() const { return LyapunovParams::make(v, e_avg, e_max()); }
  std::size_t chain_iterations() const;

  /// 9x7 grid of 500 m cells, 315 users, 2000 slots, E_avg = 202.5, beta = 0.1.
  static Scenario paper_default();
  /// 3x3 grid, 30 users, 500 slots; the budget keeps the paper's per-user share.
  static Scenario desk_preset();
};

struct SlotRecord {
  std::size_t t = 0;
  std::vector<DelayBreakdown> delays;
  double sum_latency_s = 0.0;
  double avg_latency_s = 0.0;
  double migration_cost = 0.0;
  double queue_before = 0.0;
  double queue_after = 0.0;
  double objective = 0.0;
  SolverStats stats;
  double running_avg_latency_s = 0.0;
  double running_avg_migration_cost = 0.0;
  double running_avg_queue = 0.0;
  /// Hash of this slot's attachments, demands and perturbations.
  std::uint64_t input_digest = 0;
};

struct MetricsSeries {
  Policy policy;
  double v = 0.0;
  double e_avg = 0.0;
  std::uint64_t seed = 0;
  std::size_t users = 0;
  std::size_t nodes = 0;
  LyapunovParams params;
  std::vector<SlotRecord> records;
  double wall_time_s = 0.0;
};

struct RunSummary {
  std::string policy;
  double v = 0.0;
  double e_avg = 0.0;
  std::uint64_t seed = 0;
  double avg_latency_s = 0.0;
  double avg_migration_cost = 0.0;
  double avg_queue = 0.0;
  double final_queue = 0.0;
  double wall_time_s = 0.0;
};

struct SlotContext {
  std::size_t t;
  const SlotProblem& problem;
  const PlacementProfile& chosen;
  std::span<const Point> positions;
};

struct RunOptions {
  /// Record wall-clock time; off by default so outputs are reproducible.
  bool measure_time = false;
  std::function<void(const SlotContext&)> observer;
};

/// Slot 0 places every service on its nearest node without charge; slots
/// 1..horizon are decided by the scenario's policy. Mobility comes from
/// scenario.trace_path when set, synthetic waypoint motion otherwise.
MetricsSeries run(const Scenario& scenario, const RunOptions& options = {});
MetricsSeries run(const Scenario& scenario, PositionSource& positions,
                  const RunOptions& options = {});

/// Stand-alone slot of the scenario's model: uniform positions, fresh demands
/// and perturbations, a random previous profile and a queue in [0, 2 E_avg].
SlotProblem sample_slot_problem(const Scenario& scenario, SplitMix64& rng);

/// Throws std::invalid_argument on an empty series.
RunSummary summarize(const MetricsSeries& series);

/// One run per V on common random numbers.
std::vector<MetricsSeries> sweep_runs(const Scenario& scenario, std::span<const double> v_values,
                                      const RunOptions& options = {});
std::vector<RunSummary> sweep_v(const Scenario& scenario, std::span<const double> v_values,
                                const RunOptions& options = {});

/// Long-run latency against the per-slot brute-force latency optimum, which
/// stands in for the offline optimum.
struct LatencyBoundReport {
  std::size_t slots = 0;
  double v = 0.0;
  double beta = 0.0;
  double b = 0.0;
  double log_profiles = 0.0;  // ln(M^N)
  double optimum_proxy = 0.0;  // time-average of the per-slot minimum sum latency
  double markov_realized = 0.0;
  double markov_bound = 0.0;
  bool markov_within = false;
  double ratio_bound = 0.0;
  double best_response_realized = 0.0;
  double best_response_bound = 0.0;
  bool best_response_within = false;
};

LatencyBoundReport latency_bound_check(const Scenario& scenario);

struct QueueBoundReport {
  std::size_t horizon = 0;
  double e_avg = 0.0;
  double avg_queue = 0.0;
  double final_queue = 0.0;
  double final_queue_per_slot = 0.0;
  double threshold = 0.0;
  bool queue_small = false;
  double avg_migration_cost = 0.0;
  bool budget_identity_holds = false;  // sum E(t) <= T E_avg + Q(T)
  bool lemma1_all_slots = false;
  bool e_max_respected = false;
};

/// threshold applies to Q(T)/T; defaults to 5% of E_avg.
QueueBoundReport queue_bound_check(const MetricsSeries& series,
                                   std::optional<double> threshold = std::nullopt);

inline constexpr std::string_view kMetricsHeader =
    "t,sum_latency_s,avg_latency_s,migration_cost,queue,objective,solver_moves,solver_iters";
inline constexpr std::string_view kSummaryHeader =
    "policy,v,e_avg,seed,avg_latency_s,avg_migration_cost,avg_queue,final_queue,wall_time_s";

void write_metrics_csv(std::ostream& out, const MetricsSeries& series);
void write_summary_csv(std::ostream& out, std::span<const RunSummary> summaries);

std::string format_latency_report(const LatencyBoundReport& report);
std::string format_queue_report(const QueueBoundReport& report);

}  // namespace edgeplace
