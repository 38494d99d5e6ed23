#pragma once

// Equilibrium cost and approximation-ratio bounds for best-response placement.

#include <cstddef>
#include <vector>

#include "edgeplace/lyapunov.hpp"

namespace edgeplace {

/// Per-user and per-node extremes of the cost inputs over one slot or a run.
struct CostExtremes {
  std::vector<double> demand_max;
  std::vector<double> demand_min;
  std::vector<double> comm_max;
  std::vector<double> comm_min;
  std::vector<double> rho_max;
  double capacity_min = 0.0;
  double capacity_max = 0.0;

  static CostExtremes of(const SlotProblem& problem);
  /// Widens this to cover `other`; both must describe the same user count.
  void merge(const CostExtremes& other);
};

/// V R_max (M + N - 1) / (M F_min) + V H_max + rho_max for user k. Any user's
/// own cost at an equilibrium is at most this.
double per_user_cost_bound(UserId k, const SlotProblem& problem,
                           const CostExtremes& extremes);

/// Sum over users of V R_min / F_max + V H_min, a lower bound on the optimum.
double optimum_lower_bound(const SlotProblem& problem, const CostExtremes& extremes);

/// Upper bound on (equilibrium cost) / (optimal cost):
/// sum_k per_user_cost_bound(k) / optimum_lower_bound().
/// Throws std::domain_error when the denominator is zero.
double approximation_ratio_bound(const SlotProblem& problem, const CostExtremes& extremes);

}  // namespace edgeplace
