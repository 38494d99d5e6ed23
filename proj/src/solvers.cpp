#include "edgeplace/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "edgeplace/errors.hpp"

namespace edgeplace {

namespace {

// Odometer over all profiles in lexicographic order; false after the last one.
bool next_profile(PlacementProfile& p, std::size_t nodes) {
  for (std::size_t k = p.size(); k-- > 0;) {
    if (++p[k] < nodes) return true;
    p[k] = 0;
  }
  return false;
}

std::size_t sample_index(std::span<const double> weights, double total, SplitMix64& rng) {
  const double target = rng.uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  // Rounding can leave target == total; fall back to the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return weights.size() - 1;
}

}  // namespace

std::size_t default_markov_iterations(std::size_t users, std::size_t nodes) {
  return 50 * users * nodes;
}

std::uint64_t profile_count(std::size_t users, std::size_t nodes, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < users; ++k) {
    if (nodes != 0 && count > cap / nodes)
      throw SizeCapError(std::to_string(nodes) + "^" + std::to_string(users) +
                         " profiles exceed the enumeration cap of " +
                         std::to_string(cap));
    count *= nodes;
  }
  if (count > cap)
    throw SizeCapError(std::to_string(count) + " profiles exceed the enumeration cap of " +
                       std::to_string(cap));
  return count;
}

PlacementProfile profile_at(std::uint64_t index, std::size_t users, std::size_t nodes) {
  PlacementProfile p(users, 0);
  for (std::size_t k = users; k-- > 0;) {
    p[k] = static_cast<NodeId>(index % nodes);
    index /= nodes;
  }
  return p;
}

SolveResult brute_force_solve(const SlotProblem& problem, std::uint64_t cap) {
  profile_count(problem.users(), problem.nodes(), cap);
  PlacementProfile p(problem.users(), 0);
  SolveResult best{p, slot_objective(p, problem), {}};
  best.stats.iterations = 1;
  while (next_profile(p, problem.nodes())) {
    const double u = slot_objective(p, problem);
    ++best.stats.iterations;
    if (u < best.objective) {
      best.objective = u;
      best.profile = p;
    }
  }
  best.stats.evaluations = best.stats.iterations;
  return best;
}

std::vector<double> markov_transition_distribution(const SlotProblem& problem,
                                                   const PlacementProfile& profile,
                                                   UserId k, double beta) {
  const std::size_t m = problem.nodes();
  std::vector<double> u(m);
  PlacementProfile moved = profile;
  for (NodeId i = 0; i < m; ++i) {
    moved[k] = i;
    u[i] = slot_objective(moved, problem);
  }
  const double lowest = *std::min_element(u.begin(), u.end());
  std::vector<double> p(m);
  for (NodeId i = 0; i < m; ++i) p[i] = std::exp(-beta * (u[i] - lowest));
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return p;
}

SolveResult markov_search(const SlotProblem& problem, const MarkovConfig& config,
                          const PlacementProfile& initial) {
  const std::size_t n = problem.users();
  const std::size_t m = problem.nodes();
  initial.validate(n, m);
  const double v = problem.params().v;
  SplitMix64 rng = derive_stream(config.seed, 0x4d41524b4f56ULL);

  PlacementProfile current = initial;
  std::vector<std::size_t> load(m, 0);
  std::vector<double> demand_sum(m, 0.0);
  for (UserId k = 0; k < n; ++k) {
    ++load[current[k]];
    demand_sum[current[k]] += problem.demand(k);
  }
  double objective = slot_objective(current, problem);

  SolveResult best{current, objective, {}};
  std::vector<double> marginal(m), weight(m);
  const auto node_term = [&](NodeId i, std::size_t l, double s) {
    return v * static_cast<double>(l) * s / problem.capacity(i);
  };

  for (std::size_t it = 0; it < config.iterations && n > 0; ++it) {
    const UserId k = rng.below(n);
    const NodeId from = current[k];
    const double r = problem.demand(k);

    // Objective with k removed, then the marginal cost of adding k to each node.
    --load[from];
    demand_sum[from] -= r;
    const double removed = objective -
                           (node_term(from, load[from] + 1, demand_sum[from] + r) -
                            node_term(from, load[from], demand_sum[from])) -
                           (v * problem.comm(k, from) + problem.rho(k, from));
    for (NodeId i = 0; i < m; ++i) {
      marginal[i] = node_term(i, load[i] + 1, demand_sum[i] + r) -
                    node_term(i, load[i], demand_sum[i]) + v * problem.comm(k, i) +
                    problem.rho(k, i);
    }
    const double lowest = *std::min_element(marginal.begin(), marginal.end());
    double total = 0.0;
    for (NodeId i = 0; i < m; ++i) {
      weight[i] = std::exp(-config.beta * (marginal[i] - lowest));
      total += weight[i];
    }
    const NodeId to = sample_index(weight, total, rng);

    current[k] = to;
    ++load[to];
    demand_sum[to] += r;
    objective = removed + marginal[to];
    ++best.stats.iterations;
    best.stats.evaluations += m;
    if (to != from) ++best.stats.moves;
    if (objective < best.objective) {
      best.objective = objective;
      best.profile = current;
    }
  }
  best.objective = slot_objective(best.profile, problem);
  return best;
}

SolveResult markov_search(const SlotProblem& problem, const MarkovConfig& config) {
  SplitMix64 rng = derive_stream(config.seed, 0x494e4954ULL);
  PlacementProfile initial(problem.users(), 0);
  for (UserId k = 0; k < problem.users(); ++k) initial[k] = rng.below(problem.nodes());
  return markov_search(problem, config, initial);
}

std::vector<double> stationary_distribution(const SlotProblem& problem, double beta,
                                            std::uint64_t cap) {
  const std::uint64_t count = profile_count(problem.users(), problem.nodes(), cap);
  std::vector<double> u;
  u.reserve(count);
  PlacementProfile p(problem.users(), 0);
  do {
    u.push_back(slot_objective(p, problem));
  } while (next_profile(p, problem.nodes()));
  const double lowest = *std::min_element(u.begin(), u.end());
  double total = 0.0;
  for (double& x : u) {
    x = std::exp(-beta * (x - lowest));
    total += x;
  }
  for (double& x : u) x /= total;
  return u;
}

double stationary_expected_objective(const SlotProblem& problem, double beta,
                                     std::uint64_t cap) {
  const auto q = stationary_distribution(problem, beta, cap);
  PlacementProfile p(problem.users(), 0);
  double expected = 0.0;
  std::size_t idx = 0;
  do {
    expected += q[idx++] * slot_objective(p, problem);
  } while (next_profile(p, problem.nodes()));
  return expected;
}

double markov_gap_bound(double beta, std::size_t nodes, std::size_t users) {
  return static_cast<double>(users) * std::log(static_cast<double>(nodes)) / beta;
}

double user_cost(UserId k, const PlacementProfile& profile, const SlotProblem& problem) {
  const auto loads = node_loads(profile, problem.nodes());
  const NodeId i = profile[k];
  return problem.user_cost(k, i, loads[i] - 1);
}

namespace {

NodeId best_node(UserId k, NodeId current, const std::vector<std::size_t>& loads,
                 const SlotProblem& problem, double* best_cost) {
  NodeId best = 0;
  double lowest = std::numeric_limits<double>::infinity();
  for (NodeId i = 0; i < problem.nodes(); ++i) {
    const std::size_t others = loads[i] - (i == current ? 1 : 0);
    const double c = problem.user_cost(k, i, others);
    if (c < lowest) {
      lowest = c;
      best = i;
    }
  }
  if (best_cost) *best_cost = lowest;
  return best;
}

}  // namespace

NodeId best_response(UserId k, const PlacementProfile& profile, const SlotProblem& problem) {
  const auto loads = node_loads(profile, problem.nodes());
  return best_node(k, profile[k], loads, problem, nullptr);
}

std::size_t best_response_move_bound(std::size_t nodes, std::size_t users) {
  return nodes * users * (users + 1) / 2;
}

std::pair<SolveResult, EquilibriumCertificate> best_response_search(
    const SlotProblem& problem, const PlacementProfile& initial,
    std::span<const UserId> order) {
  const std::size_t n = problem.users();
  initial.validate(n, problem.nodes());
  std::vector<UserId> sequence(order.begin(), order.end());
  if (sequence.empty()) {
    sequence.resize(n);
    std::iota(sequence.begin(), sequence.end(), UserId{0});
  }
  if (sequence.size() != n) throw std::invalid_argument("order must list every user once");

  PlacementProfile profile = initial;
  auto loads = node_loads(profile, problem.nodes());
  const std::size_t bound = best_response_move_bound(problem.nodes(), n);

  SolveResult result;
  EquilibriumCertificate cert;
  bool changed = true;
  while (changed) {
    changed = false;
    ++cert.rounds;
    for (UserId k : sequence) {
      const NodeId from = profile[k];
      const double current_cost = problem.user_cost(k, from, loads[from] - 1);
      double cost = 0.0;
      const NodeId to = best_node(k, from, loads, problem, &cost);
      result.stats.evaluations += problem.nodes();
      if (cost < current_cost) {
        --loads[from];
        ++loads[to];
        profile[k] = to;
        cert.moves.push_back({k, from, to, current_cost, cost});
        changed = true;
        if (cert.moves.size() > bound)
          throw InvariantViolation("best response exceeded " + std::to_string(bound) +
                                   " moves");
      }
    }
  }
  cert.total_moves = cert.moves.size();
  cert.is_nash = is_nash_equilibrium(problem, profile);
  result.stats.iterations = cert.rounds;
  result.stats.moves = cert.total_moves;
  result.objective = slot_objective(profile, problem);
  result.profile = std::move(profile);
  return {std::move(result), std::move(cert)};
}

bool is_nash_equilibrium(const SlotProblem& problem, const PlacementProfile& profile,
                         double relative_tolerance) {
  const double v = problem.params().v;
  const auto own_cost = [&](const PlacementProfile& p, UserId k) {
    const auto loads = node_loads(p, problem.nodes());
    const NodeId i = p[k];
    return v * computing_delay(problem.demand(k), loads[i], problem.capacity(i)) +
           v * problem.comm(k, i) + problem.rho(k, i);
  };
  PlacementProfile deviated = profile;
  for (UserId k = 0; k < profile.size(); ++k) {
    const double stay = own_cost(profile, k);
    const double slack = relative_tolerance * std::max(1.0, std::abs(stay));
    for (NodeId i = 0; i < problem.nodes(); ++i) {
      if (i == profile[k]) continue;
      deviated[k] = i;
      if (own_cost(deviated, k) < stay - slack) return false;
    }
    deviated[k] = profile[k];
  }
  return true;
}

ImprovementPathReport analyze_improvement_path(const PlacementProfile& initial,
                                               std::span<const MoveRecord> moves,
                                               std::size_t nodes) {
  ImprovementPathReport report;
  report.length = moves.size();
  report.chained_forward = true;
  report.chained_backward = true;
  for (std::size_t r = 1; r < moves.size(); ++r) {
    if (moves[r].from != moves[r - 1].to) report.chained_forward = false;
    if (moves[r].to != moves[r - 1].from) report.chained_backward = false;
  }

  std::vector<std::size_t> per_user(initial.size(), 0);
  for (const auto& mv : moves) ++per_user.at(mv.user);
  report.max_moves_per_user =
      per_user.empty() ? 0 : *std::max_element(per_user.begin(), per_user.end());

  std::vector<std::vector<std::size_t>> history;
  auto loads = node_loads(initial, nodes);
  history.push_back(loads);
  for (const auto& mv : moves) {
    --loads[mv.from];
    ++loads[mv.to];
    history.push_back(loads);
  }
  report.load_bracket_holds = true;
  for (NodeId i = 0; i < nodes; ++i) {
    std::size_t lo = history.front()[i];
    for (const auto& g : history) lo = std::min(lo, g[i]);
    for (const auto& g : history)
      if (g[i] > lo + 1) report.load_bracket_holds = false;
  }
  return report;
}

}  // namespace edgeplace
