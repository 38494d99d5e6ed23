#pragma once

// Physical world of the placement problem: grid map, edge nodes, user
// demands and the per-slot delay and migration cost formulas.

#include <cstddef>
#include <span>
#include <vector>

namespace edgeplace {

using NodeId = std::size_t;
using UserId = std::size_t;

inline constexpr double kPerturbationMin = 1.0;
inline constexpr double kPerturbationMax = 1.35;

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const Cell&) const = default;
};

/// Rectangular grid of square cells with one edge node per cell. Node ids are
/// row-major cell indices.
struct GridMap {
  std::size_t width_cells = 9;
  std::size_t height_cells = 7;
  double cell_size_m = 500.0;
  double hop_delay_s = 36.0;

  bool operator==(const GridMap&) const = default;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  std::size_t node_count() const { return width_cells * height_cells; }
  double width_m() const { return static_cast<double>(width_cells) * cell_size_m; }
  double height_m() const { return static_cast<double>(height_cells) * cell_size_m; }
  bool contains(Point p) const;
  std::size_t diameter_hops() const { return width_cells + height_cells - 2; }

  Cell cell_of(NodeId node) const { return {node / width_cells, node % width_cells}; }
  NodeId node_at(Cell cell) const { return cell.row * width_cells + cell.col; }
};

struct MecNode {
  NodeId index = 0;
  Cell cell;
  double capacity_cycles_per_s = 25e9;
};

std::vector<MecNode> make_nodes(const GridMap& map, double capacity_cycles_per_s);

/// Request volume model: bit-rate uniform in [rate_min, rate_max] times a
/// processing density, for one second of traffic.
struct DemandModel {
  double rate_min_bps = 0.6e6;
  double rate_max_bps = 1.0e6;
  double cycles_per_bit = 2640.0;

  bool operator==(const DemandModel&) const = default;

  double min_cycles() const { return rate_min_bps * cycles_per_bit; }
  double max_cycles() const { return rate_max_bps * cycles_per_bit; }
  /// Mean demand; scales the fixed part of the migration cost.
  double reference_cycles() const { return 0.5 * (min_cycles() + max_cycles()); }
};

/// Assignment of every user's service to exactly one node.
struct PlacementProfile {
  std::vector<NodeId> assignment;

  PlacementProfile() = default;
  explicit PlacementProfile(std::vector<NodeId> a) : assignment(std::move(a)) {}
  PlacementProfile(std::size_t users, NodeId node) : assignment(users, node) {}

  std::size_t size() const { return assignment.size(); }
  NodeId operator[](UserId k) const { return assignment[k]; }
  NodeId& operator[](UserId k) { return assignment[k]; }
  bool operator==(const PlacementProfile&) const = default;
  auto operator<=>(const PlacementProfile&) const = default;

  /// Throws std::invalid_argument unless size() == users and entries < nodes.
  void validate(std::size_t users, std::size_t nodes) const;
};

/// Per-slot communication delays H[k][i] (seconds) and migration costs
/// E[k][j][i] (cost units, j = source, i = destination).
class SlotCostMatrices {
 public:
  SlotCostMatrices() = default;
  SlotCostMatrices(std::size_t users, std::size_t nodes);

  std::size_t users() const { return users_; }
  std::size_t nodes() const { return nodes_; }

  double comm(UserId k, NodeId i) const { return comm_[k * nodes_ + i]; }
  double& comm(UserId k, NodeId i) { return comm_[k * nodes_ + i]; }
  double migration(UserId k, NodeId from, NodeId to) const {
    return migration_[(k * nodes_ + from) * nodes_ + to];
  }
  double& migration(UserId k, NodeId from, NodeId to) {
    return migration_[(k * nodes_ + from) * nodes_ + to];
  }

  /// Throws std::invalid_argument on negative entries or a non-zero diagonal.
  void validate() const;

 private:
  std::size_t users_ = 0;
  std::size_t nodes_ = 0;
  std::vector<double> comm_;
  std::vector<double> migration_;
};

struct DelayBreakdown {
  double computing_s = 0.0;
  double communication_s = 0.0;
  double total_s = 0.0;
};

/// Cell containing the position; the max edges belong to the last cell.
/// Throws std::domain_error outside the map.
Cell attachment_cell(Point position_m, const GridMap& map);
NodeId attachment_node(Point position_m, const GridMap& map);

std::size_t hop_distance(Cell a, Cell b);

std::vector<std::size_t> node_loads(const PlacementProfile& profile,
                                    std::size_t node_count);

/// Equal-share processing time: demand * load / capacity.
double computing_delay(double demand_cycles, std::size_t load,
                       double capacity_cycles_per_s);

double computing_delay(UserId k, const PlacementProfile& profile,
                       std::span<const double> demands,
                       std::span<const MecNode> nodes);

/// hops * hop_delay * u. Throws std::domain_error if u is outside [1, 1.35].
double communication_delay(Cell attachment, Cell node_cell, const GridMap& map,
                           double perturbation);

/// Zero for a stay; otherwise (hops + 0.5 * demand_factor) * u.
double migration_cost_entry(Cell source, Cell destination, double perturbation,
                            double demand_factor);

double slot_migration_cost(const PlacementProfile& previous,
                           const PlacementProfile& current,
                           const SlotCostMatrices& matrices);

std::vector<DelayBreakdown> delay_breakdown(const PlacementProfile& profile,
                                            std::span<const double> demands,
                                            std::span<const MecNode> nodes,
                                            const SlotCostMatrices& matrices);

/// Builds H and E for one slot from attachments and per-user perturbations.
SlotCostMatrices build_cost_matrices(const GridMap& map,
                                     std::span<const Cell> attachments,
                                     std::span<const double> demands,
                                     std::span<const double> comm_perturbation,
                                     std::span<const double> migration_perturbation,
                                     double reference_demand);

}  // namespace edgeplace
