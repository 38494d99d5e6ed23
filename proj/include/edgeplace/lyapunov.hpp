#pragma once

// Virtual migration-cost queue and the per-slot drift-plus-penalty objective.

#include <cstddef>
#include <vector>

#include "edgeplace/model.hpp"

namespace edgeplace {

/// Absolute slack used by every floating-point inequality check.
inline constexpr double kInequalitySlack = 1e-9;

/// max(q + e_t - e_avg, 0). Throws std::domain_error on negative inputs or
/// a non-positive budget.
double queue_update(double q, double e_t, double e_avg);

/// 0.5 * q^2
double lyapunov_value(double q);

/// 0.5 * (e_avg^2 + e_max^2)
double bound_b(double e_avg, double e_max);

struct LyapunovParams {
  double v = 0.0;
  double e_avg = 1.0;
  double e_max = 0.0;
  double b = 0.0;

  static LyapunovParams make(double v, double e_avg, double e_max) {
    return {v, e_avg, e_max, bound_b(e_avg, e_max)};
  }
};

/// Worst slot migration cost any placement sequence can produce: every user
/// crosses the map diameter with the largest demand factor and perturbation.
double worst_case_slot_migration(const GridMap& map, std::size_t users,
                                 double max_demand_factor);

/// Drift bound for one executed slot, in pathwise form:
/// 0.5 (q_t1^2 - q_t^2) <= B + q_t (e_t - e_avg).
/// The latency term appears on both sides and cancels; it is accepted so the
/// call site mirrors the full drift-plus-penalty inequality.
bool lemma1_pathwise_check(double q_t, double q_t1, double e_t,
                           double sum_latency_t, const LyapunovParams& params);

class VirtualQueue {
 public:
  double length() const { return length_; }
  const std::vector<double>& history() const { return history_; }

  /// Applies one slot's migration cost and returns the new backlog.
  double update(double e_t, double e_avg) {
    length_ = queue_update(length_, e_t, e_avg);
    history_.push_back(length_);
    return length_;
  }

 private:
  double length_ = 0.0;
  std::vector<double> history_;
};

/// Everything one slot's minimization needs. Immutable after construction.
class SlotProblem {
 public:
  SlotProblem(SlotCostMatrices matrices, std::vector<double> demands,
              std::vector<double> capacities, PlacementProfile previous,
              double queue, LyapunovParams params);

  std::size_t users() const { return matrices_.users(); }
  std::size_t nodes() const { return matrices_.nodes(); }

  double demand(UserId k) const { return demands_[k]; }
  double capacity(NodeId i) const { return capacities_[i]; }
  double comm(UserId k, NodeId i) const { return matrices_.comm(k, i); }
  /// Q(t) times the cost of moving user k from its previous node to i.
  double rho(UserId k, NodeId i) const { return rho_[k * nodes() + i]; }
  double queue() const { return queue_; }
  const LyapunovParams& params() const { return params_; }
  const PlacementProfile& previous() const { return previous_; }
  const SlotCostMatrices& matrices() const { return matrices_; }
  const std::vector<double>& demands() const { return demands_; }
  const std::vector<double>& capacities() const { return capacities_; }

  /// Own cost of user k on node i while `others_on_node` other users share i.
  double user_cost(UserId k, NodeId i, std::size_t others_on_node) const {
    const double v = params_.v;
    return v * demands_[k] * static_cast<double>(others_on_node + 1) / capacities_[i] +
           v * comm(k, i) + rho(k, i);
  }

  /// Same slot with the queue emptied: the objective becomes V * latency.
  SlotProblem latency_only() const;
  SlotProblem with_params(double queue, LyapunovParams params) const;

 private:
  SlotCostMatrices matrices_;
  std::vector<double> demands_;
  std::vector<double> capacities_;
  PlacementProfile previous_;
  double queue_;
  LyapunovParams params_;
  std::vector<double> rho_;
};

/// U(c, t): sum over users of V * T^k + rho[k][c_k]. The profile-independent
/// -Q * E_avg term is omitted.
double slot_objective(const PlacementProfile& profile, const SlotProblem& problem);

/// Sum of total latencies T^k (seconds) under the profile.
double sum_latency(const PlacementProfile& profile, const SlotProblem& problem);

}  // namespace edgeplace
