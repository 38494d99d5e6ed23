#include "edgeplace/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace edgeplace {

namespace {

// Greedy pass with an arbitrary communication-delay table (row-major N x M).
template <typename CommFn>
PlacementProfile greedy_pass(const SlotProblem& problem, std::span<const UserId> users,
                             CommFn comm) {
  PlacementProfile profile = problem.previous();
  auto loads = node_loads(profile, problem.nodes());
  const double v = problem.params().v;
  for (UserId k : users) {
    const NodeId from = profile[k];
    const auto cost = [&](NodeId i) {
      const std::size_t others = loads[i] - (i == from ? 1 : 0);
      return v * computing_delay(problem.demand(k), others + 1, problem.capacity(i)) +
             v * comm(k, i);
    };
    NodeId best = from;
    double lowest = cost(from);
    for (NodeId i = 0; i < problem.nodes(); ++i) {
      const double c = cost(i);
      if (c < lowest) {
        lowest = c;
        best = i;
      }
    }
    if (best != from) {
      --loads[from];
      ++loads[best];
      profile[k] = best;
    }
  }
  return profile;
}

}  // namespace

PlacementProfile baseline_always_nearest(std::span<const NodeId> attachments) {
  return PlacementProfile(std::vector<NodeId>(attachments.begin(), attachments.end()));
}

PlacementProfile baseline_no_migration(const PlacementProfile& initial) { return initial; }

PlacementProfile greedy_sequence(const SlotProblem& problem, std::span<const UserId> users) {
  return greedy_pass(problem, users,
                     [&](UserId k, NodeId i) { return problem.comm(k, i); });
}

PlacementProfile baseline_greedy_k(const SlotProblem& problem, std::size_t k_count,
                                   GreedyOrder order, SplitMix64& rng) {
  const std::size_t n = problem.users();
  if (k_count > n) throw std::invalid_argument("K exceeds the number of users");
  std::vector<UserId> users(n);
  std::iota(users.begin(), users.end(), UserId{0});

  if (order == GreedyOrder::random) {
    for (std::size_t i = 0; i < k_count; ++i)
      std::swap(users[i], users[i + rng.below(n - i)]);
  } else {
    const auto& prev = problem.previous();
    const auto loads = node_loads(prev, problem.nodes());
    std::vector<double> latency(n);
    for (UserId k = 0; k < n; ++k)
      latency[k] = computing_delay(problem.demand(k), loads[prev[k]],
                                   problem.capacity(prev[k])) +
                   problem.comm(k, prev[k]);
    std::stable_sort(users.begin(), users.end(),
                     [&](UserId a, UserId b) { return latency[a] > latency[b]; });
  }
  users.resize(k_count);
  return greedy_sequence(problem, users);
}

PlacementProfile baseline_fmec(const SlotProblem& problem, const FmecInputs& in) {
  const std::size_t n = problem.users();
  if (in.positions_m.size() != n || in.velocities_m_per_s.size() != n ||
      in.comm_perturbation.size() != n)
    throw std::invalid_argument("FMeC inputs must cover every user");
  std::vector<Cell> predicted(n);
  for (UserId k = 0; k < n; ++k) {
    const Point p{
        std::clamp(in.positions_m[k].x + in.velocities_m_per_s[k].x * in.slot_length_s,
                   0.0, in.map.width_m()),
        std::clamp(in.positions_m[k].y + in.velocities_m_per_s[k].y * in.slot_length_s,
                   0.0, in.map.height_m())};
    predicted[k] = attachment_cell(p, in.map);
  }
  std::vector<UserId> users(n);
  std::iota(users.begin(), users.end(), UserId{0});
  return greedy_pass(problem, users, [&](UserId k, NodeId i) {
    return communication_delay(predicted[k], in.map.cell_of(i), in.map,
                               in.comm_perturbation[k]);
  });
}

}  // namespace edgeplace
