#pragma once

// Comparison policies. All of them ignore the migration-cost queue: greedy
// moves minimize V * latency only.

#include <cstddef>
#include <span>

#include "edgeplace/lyapunov.hpp"
#include "edgeplace/model.hpp"
#include "edgeplace/random.hpp"

namespace edgeplace {

/// Every service on the node of the user's own cell (AM / GM).
PlacementProfile baseline_always_nearest(std::span<const NodeId> attachments);

/// The initial placement, forever (NM).
PlacementProfile baseline_no_migration(const PlacementProfile& initial);

/// Starting from the previous placement, moves each listed user in turn to its
/// latency-optimal node given the others. A user stays unless another node is
/// strictly better; among better nodes the lowest index wins.
PlacementProfile greedy_sequence(const SlotProblem& problem, std::span<const UserId> users);

enum class GreedyOrder { random, descending_latency };

/// GRK (random) and GK (descending current latency): greedy moves for k_count users.
PlacementProfile baseline_greedy_k(const SlotProblem& problem, std::size_t k_count,
                                   GreedyOrder order, SplitMix64& rng);

struct FmecInputs {
  const GridMap& map;
  std::span<const Point> positions_m;
  std::span<const Point> velocities_m_per_s;
  double slot_length_s = 300.0;
  std::span<const double> comm_perturbation;
};

/// Velocity-extrapolating greedy: each user's next position is predicted as
/// position + velocity * slot_length (clamped to the map), and a greedy pass in
/// user order evaluates communication delay from the predicted cell.
PlacementProfile baseline_fmec(const SlotProblem& problem, const FmecInputs& inputs);

}  // namespace edgeplace
