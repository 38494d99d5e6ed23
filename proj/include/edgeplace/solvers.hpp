#pragma once

// Per-slot minimizers of U(c, t): exhaustive oracle, Markov-approximation
// chain and asynchronous best-response dynamics.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "edgeplace/lyapunov.hpp"
#include "edgeplace/model.hpp"
#include "edgeplace/random.hpp"

namespace edgeplace {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

struct SolverStats {
  std::size_t iterations = 0;   // chain steps, sweeps or enumerated profiles
  std::size_t moves = 0;        // placements that actually changed
  std::size_t evaluations = 0;  // candidate cost evaluations
};

struct SolveResult {
  PlacementProfile profile;
  double objective = 0.0;
  SolverStats stats;
};

struct MarkovConfig {
  double beta = 0.1;
  std::size_t iterations = 1;
  std::uint64_t seed = 0;
};

/// 50 * N * M chain steps.
std::size_t default_markov_iterations(std::size_t users, std::size_t nodes);

struct MoveRecord {
  UserId user = 0;
  NodeId from = 0;
  NodeId to = 0;
  double cost_before = 0.0;
  double cost_after = 0.0;
};

struct EquilibriumCertificate {
  bool is_nash = false;
  std::size_t total_moves = 0;
  std::size_t rounds = 0;
  std::vector<MoveRecord> moves;
};

/// M^N, or SizeCapError if it exceeds cap.
std::uint64_t profile_count(std::size_t users, std::size_t nodes,
                            std::uint64_t cap = kDefaultEnumerationCap);

/// Profile number `index` in lexicographic order (user 0 most significant).
PlacementProfile profile_at(std::uint64_t index, std::size_t users, std::size_t nodes);

/// Global minimum of U over all M^N profiles; ties go to the lexicographically
/// smallest assignment.
SolveResult brute_force_solve(const SlotProblem& problem,
                              std::uint64_t cap = kDefaultEnumerationCap);

/// Heat-bath move for user k: target i has probability proportional to
/// exp(-beta * U(c with k on i)). With uniform user selection this chain is
/// reversible with respect to the Gibbs distribution exp(-beta U) / Z.
std::vector<double> markov_transition_distribution(const SlotProblem& problem,
                                                   const PlacementProfile& profile,
                                                   UserId k, double beta);

/// Runs config.iterations chain steps from `initial` and returns the best
/// profile visited.
SolveResult markov_search(const SlotProblem& problem, const MarkovConfig& config,
                          const PlacementProfile& initial);

/// Same, starting from a uniformly random profile drawn from config.seed.
SolveResult markov_search(const SlotProblem& problem, const MarkovConfig& config);

/// Exact Gibbs distribution over all profiles in profile_at() order.
std::vector<double> stationary_distribution(const SlotProblem& problem, double beta,
                                            std::uint64_t cap = kDefaultEnumerationCap);

/// Expected U under stationary_distribution().
double stationary_expected_objective(const SlotProblem& problem, double beta,
                                     std::uint64_t cap = kDefaultEnumerationCap);

/// ln(M^N) / beta
double markov_gap_bound(double beta, std::size_t nodes, std::size_t users);

/// User k's own cost at its current node given everyone else in `profile`.
double user_cost(UserId k, const PlacementProfile& profile, const SlotProblem& problem);

/// Cost-minimizing node for user k against the others; lowest index on ties.
NodeId best_response(UserId k, const PlacementProfile& profile, const SlotProblem& problem);

/// M * N (N + 1) / 2
std::size_t best_response_move_bound(std::size_t nodes, std::size_t users);

/// Asynchronous best-response sweeps in `order` (default: ascending user id)
/// until a sweep changes nothing. Throws InvariantViolation if the move count
/// exceeds best_response_move_bound().
std::pair<SolveResult, EquilibriumCertificate> best_response_search(
    const SlotProblem& problem, const PlacementProfile& initial,
    std::span<const UserId> order = {});

/// Exhaustive unilateral-deviation scan. Recomputes loads from scratch for
/// every deviation; independent of best_response().
bool is_nash_equilibrium(const SlotProblem& problem, const PlacementProfile& profile,
                         double relative_tolerance = 1e-12);

/// Structure of a recorded single-move improvement path.
struct ImprovementPathReport {
  std::size_t length = 0;
  bool chained_forward = false;   // each move starts where the previous one ended
  bool chained_backward = false;  // each move ends where the previous one started
  std::size_t max_moves_per_user = 0;
  bool load_bracket_holds = false;  // g_min <= g(r) <= g_min + 1 for all nodes
};

ImprovementPathReport analyze_improvement_path(const PlacementProfile& initial,
                                               std::span<const MoveRecord> moves,
                                               std::size_t nodes);

}  // namespace edgeplace
