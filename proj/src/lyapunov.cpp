#include "edgeplace/lyapunov.hpp"

#include <algorithm>
#include <stdexcept>

namespace edgeplace {

double queue_update(double q, double e_t, double e_avg) {
  if (!(q >= 0.0)) throw std::domain_error("queue length must be >= 0");
  if (!(e_t >= 0.0)) throw std::domain_error("migration cost must be >= 0");
  if (!(e_avg > 0.0)) throw std::domain_error("budget must be > 0");
  return std::max(q + e_t - e_avg, 0.0);
}

double lyapunov_value(double q) { return 0.5 * q * q; }

double bound_b(double e_avg, double e_max) {
  return 0.5 * (e_avg * e_avg + e_max * e_max);
}

double worst_case_slot_migration(const GridMap& map, std::size_t users,
                                 double max_demand_factor) {
  const double per_user =
      (static_cast<double>(map.diameter_hops()) + 0.5 * max_demand_factor) *
      kPerturbationMax;
  return static_cast<double>(users) * per_user;
}

bool lemma1_pathwise_check(double q_t, double q_t1, double e_t,
                           double sum_latency_t, const LyapunovParams& params) {
  const double penalty = params.v * sum_latency_t;
  const double lhs = 0.5 * (q_t1 - q_t) * (q_t1 + q_t) + penalty;
  const double rhs = params.b + penalty + q_t * (e_t - params.e_avg);
  return lhs <= rhs + kInequalitySlack;
}

SlotProblem::SlotProblem(SlotCostMatrices matrices, std::vector<double> demands,
                         std::vector<double> capacities, PlacementProfile previous,
                         double queue, LyapunovParams params)
    : matrices_(std::move(matrices)),
      demands_(std::move(demands)),
      capacities_(std::move(capacities)),
      previous_(std::move(previous)),
      queue_(queue),
      params_(params) {
  const std::size_t n = matrices_.users();
  const std::size_t m = matrices_.nodes();
  if (demands_.size() != n) throw std::invalid_argument("one demand per user required");
  if (capacities_.size() != m) throw std::invalid_argument("one capacity per node required");
  for (double r : demands_)
    if (!(r > 0.0)) throw std::invalid_argument("demands must be > 0");
  for (double f : capacities_)
    if (!(f > 0.0)) throw std::invalid_argument("capacities must be > 0");
  if (!(queue_ >= 0.0)) throw std::invalid_argument("queue must be >= 0");
  if (!(params_.v >= 0.0)) throw std::invalid_argument("V must be >= 0");
  previous_.validate(n, m);

  rho_.resize(n * m);
  for (UserId k = 0; k < n; ++k)
    for (NodeId i = 0; i < m; ++i)
      rho_[k * m + i] = queue_ * matrices_.migration(k, previous_[k], i);
}

SlotProblem SlotProblem::latency_only() const { return with_params(0.0, params_); }

SlotProblem SlotProblem::with_params(double queue, LyapunovParams params) const {
  return SlotProblem(matrices_, demands_, capacities_, previous_, queue, params);
}

double slot_objective(const PlacementProfile& profile, const SlotProblem& problem) {
  const auto loads = node_loads(profile, problem.nodes());
  const double v = problem.params().v;
  double total = 0.0;
  for (UserId k = 0; k < profile.size(); ++k) {
    const NodeId i = profile[k];
    const double latency =
        computing_delay(problem.demand(k), loads[i], problem.capacity(i)) +
        problem.comm(k, i);
    total += v * latency + problem.rho(k, i);
  }
  return total;
}

double sum_latency(const PlacementProfile& profile, const SlotProblem& problem) {
  const auto loads = node_loads(profile, problem.nodes());
  double total = 0.0;
  for (UserId k = 0; k < profile.size(); ++k) {
    const NodeId i = profile[k];
    total += computing_delay(problem.demand(k), loads[i], problem.capacity(i)) +
             problem.comm(k, i);
  }
  return total;
}

}  // namespace edgeplace
