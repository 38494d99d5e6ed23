#include "edgeplace/bounds.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace edgeplace {

CostExtremes CostExtremes::of(const SlotProblem& problem) {
  const std::size_t n = problem.users();
  const std::size_t m = problem.nodes();
  CostExtremes e;
  e.demand_max = problem.demands();
  e.demand_min = problem.demands();
  e.comm_max.assign(n, 0.0);
  e.comm_min.assign(n, std::numeric_limits<double>::infinity());
  e.rho_max.assign(n, 0.0);
  for (UserId k = 0; k < n; ++k) {
    for (NodeId i = 0; i < m; ++i) {
      e.comm_max[k] = std::max(e.comm_max[k], problem.comm(k, i));
      e.comm_min[k] = std::min(e.comm_min[k], problem.comm(k, i));
      e.rho_max[k] = std::max(e.rho_max[k], problem.rho(k, i));
    }
  }
  const auto& f = problem.capacities();
  e.capacity_min = *std::min_element(f.begin(), f.end());
  e.capacity_max = *std::max_element(f.begin(), f.end());
  return e;
}

void CostExtremes::merge(const CostExtremes& other) {
  if (other.demand_max.size() != demand_max.size())
    throw std::invalid_argument("extremes cover different user sets");
  for (std::size_t k = 0; k < demand_max.size(); ++k) {
    demand_max[k] = std::max(demand_max[k], other.demand_max[k]);
    demand_min[k] = std::min(demand_min[k], other.demand_min[k]);
    comm_max[k] = std::max(comm_max[k], other.comm_max[k]);
    comm_min[k] = std::min(comm_min[k], other.comm_min[k]);
    rho_max[k] = std::max(rho_max[k], other.rho_max[k]);
  }
  capacity_min = std::min(capacity_min, other.capacity_min);
  capacity_max = std::max(capacity_max, other.capacity_max);
}

double per_user_cost_bound(UserId k, const SlotProblem& problem,
                           const CostExtremes& extremes) {
  const double v = problem.params().v;
  const auto m = static_cast<double>(problem.nodes());
  const auto n = static_cast<double>(problem.users());
  return v * extremes.demand_max[k] * (m + n - 1.0) / (m * extremes.capacity_min) +
         v * extremes.comm_max[k] + extremes.rho_max[k];
}

double optimum_lower_bound(const SlotProblem& problem, const CostExtremes& extremes) {
  const double v = problem.params().v;
  double total = 0.0;
  for (UserId k = 0; k < problem.users(); ++k)
    total += v * extremes.demand_min[k] / extremes.capacity_max + v * extremes.comm_min[k];
  return total;
}

double approximation_ratio_bound(const SlotProblem& problem, const CostExtremes& extremes) {
  const double denominator = optimum_lower_bound(problem, extremes);
  if (!(denominator > 0.0))
    throw std::domain_error("approximation ratio bound has a zero denominator");
  double numerator = 0.0;
  for (UserId k = 0; k < problem.users(); ++k)
    numerator += per_user_cost_bound(k, problem, extremes);
  return numerator / denominator;
}

}  // namespace edgeplace
