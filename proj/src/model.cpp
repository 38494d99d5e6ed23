#include "edgeplace/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace edgeplace {

void GridMap::validate() const {
  if (width_cells < 1) throw std::invalid_argument("grid.width must be >= 1");
  if (height_cells < 1) throw std::invalid_argument("grid.height must be >= 1");
  if (!(cell_size_m > 0.0)) throw std::invalid_argument("grid.cell_m must be > 0");
  if (!(hop_delay_s >= 0.0)) throw std::invalid_argument("grid.hop_delay_s must be >= 0");
}

bool GridMap::contains(Point p) const {
  return p.x >= 0.0 && p.y >= 0.0 && p.x <= width_m() && p.y <= height_m();
}

std::vector<MecNode> make_nodes(const GridMap& map, double capacity_cycles_per_s) {
  if (!(capacity_cycles_per_s > 0.0))
    throw std::invalid_argument("node.capacity must be > 0");
  std::vector<MecNode> nodes;
  nodes.reserve(map.node_count());
  for (NodeId i = 0; i < map.node_count(); ++i)
    nodes.push_back({i, map.cell_of(i), capacity_cycles_per_s});
  return nodes;
}

void PlacementProfile::validate(std::size_t users, std::size_t nodes) const {
  if (assignment.size() != users)
    throw std::invalid_argument("profile has " + std::to_string(assignment.size()) +
                                " entries, expected " + std::to_string(users));
  for (std::size_t k = 0; k < assignment.size(); ++k)
    if (assignment[k] >= nodes)
      throw std::invalid_argument("user " + std::to_string(k) + " placed on node " +
                                  std::to_string(assignment[k]) + " of " +
                                  std::to_string(nodes));
}

SlotCostMatrices::SlotCostMatrices(std::size_t users, std::size_t nodes)
    : users_(users),
      nodes_(nodes),
      comm_(users * nodes, 0.0),
      migration_(users * nodes * nodes, 0.0) {}

void SlotCostMatrices::validate() const {
  for (double h : comm_)
    if (!(h >= 0.0)) throw std::invalid_argument("negative communication delay");
  for (double e : migration_)
    if (!(e >= 0.0)) throw std::invalid_argument("negative migration cost");
  for (UserId k = 0; k < users_; ++k)
    for (NodeId j = 0; j < nodes_; ++j)
      if (migration(k, j, j) != 0.0)
        throw std::invalid_argument("non-zero migration cost for a stay");
}

Cell attachment_cell(Point p, const GridMap& map) {
  if (!map.contains(p))
    throw std::domain_error("position (" + std::to_string(p.x) + ", " +
                            std::to_string(p.y) + ") outside the map");
  auto row = static_cast<std::size_t>(std::floor(p.y / map.cell_size_m));
  auto col = static_cast<std::size_t>(std::floor(p.x / map.cell_size_m));
  if (row >= map.height_cells) row = map.height_cells - 1;
  if (col >= map.width_cells) col = map.width_cells - 1;
  return {row, col};
}

NodeId attachment_node(Point p, const GridMap& map) {
  return map.node_at(attachment_cell(p, map));
}

std::size_t hop_distance(Cell a, Cell b) {
  auto diff = [](std::size_t x, std::size_t y) { return x > y ? x - y : y - x; };
  return diff(a.row, b.row) + diff(a.col, b.col);
}

std::vector<std::size_t> node_loads(const PlacementProfile& profile,
                                    std::size_t node_count) {
  std::vector<std::size_t> loads(node_count, 0);
  for (NodeId i : profile.assignment) ++loads.at(i);
  return loads;
}

double computing_delay(double demand_cycles, std::size_t load,
                       double capacity_cycles_per_s) {
  return demand_cycles * static_cast<double>(load) / capacity_cycles_per_s;
}

double computing_delay(UserId k, const PlacementProfile& profile,
                       std::span<const double> demands,
                       std::span<const MecNode> nodes) {
  const NodeId host = profile[k];
  std::size_t load = 0;
  for (NodeId i : profile.assignment)
    if (i == host) ++load;
  return computing_delay(demands[k], load, nodes[host].capacity_cycles_per_s);
}

namespace {
void check_perturbation(double u) {
  if (!(u >= kPerturbationMin && u <= kPerturbationMax))
    throw std::domain_error("perturbation " + std::to_string(u) +
                            " outside [1, 1.35]");
}
}  // namespace

double communication_delay(Cell attachment, Cell node_cell, const GridMap& map,
                           double perturbation) {
  check_perturbation(perturbation);
  return static_cast<double>(hop_distance(attachment, node_cell)) *
         map.hop_delay_s * perturbation;
}

double migration_cost_entry(Cell source, Cell destination, double perturbation,
                            double demand_factor) {
  if (source == destination) return 0.0;
  return (static_cast<double>(hop_distance(source, destination)) +
          0.5 * demand_factor) *
         perturbation;
}

double slot_migration_cost(const PlacementProfile& previous,
                           const PlacementProfile& current,
                           const SlotCostMatrices& matrices) {
  if (previous.size() != current.size())
    throw std::invalid_argument("profiles differ in length");
  double total = 0.0;
  for (UserId k = 0; k < current.size(); ++k)
    total += matrices.migration(k, previous[k], current[k]);
  return total;
}

std::vector<DelayBreakdown> delay_breakdown(const PlacementProfile& profile,
                                            std::span<const double> demands,
                                            std::span<const MecNode> nodes,
                                            const SlotCostMatrices& matrices) {
  const auto loads = node_loads(profile, nodes.size());
  std::vector<DelayBreakdown> out(profile.size());
  for (UserId k = 0; k < profile.size(); ++k) {
    const NodeId i = profile[k];
    auto& d = out[k];
    d.computing_s = computing_delay(demands[k], loads[i], nodes[i].capacity_cycles_per_s);
    d.communication_s = matrices.comm(k, i);
    d.total_s = d.computing_s + d.communication_s;
  }
  return out;
}

SlotCostMatrices build_cost_matrices(const GridMap& map,
                                     std::span<const Cell> attachments,
                                     std::span<const double> demands,
                                     std::span<const double> comm_perturbation,
                                     std::span<const double> migration_perturbation,
                                     double reference_demand) {
  const std::size_t users = attachments.size();
  const std::size_t nodes = map.node_count();
  SlotCostMatrices m(users, nodes);
  for (UserId k = 0; k < users; ++k) {
    const double demand_factor = demands[k] / reference_demand;
    for (NodeId i = 0; i < nodes; ++i) {
      const Cell ci = map.cell_of(i);
      m.comm(k, i) = communication_delay(attachments[k], ci, map, comm_perturbation[k]);
      for (NodeId j = 0; j < nodes; ++j)
        m.migration(k, j, i) = migration_cost_entry(map.cell_of(j), ci,
                                                    migration_perturbation[k],
                                                    demand_factor);
    }
  }
  return m;
}

}  // namespace edgeplace
