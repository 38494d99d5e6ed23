#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "edgeplace/model.hpp"

using namespace edgeplace;

namespace {
GridMap paper_map() { return GridMap{}; }
}  // namespace

TEST_CASE("attachment cell by floor division") {
  const GridMap map = paper_map();
  CHECK(attachment_cell({750, 1200}, map) == Cell{2, 1});
  CHECK(attachment_cell({0, 0}, map) == Cell{0, 0});
  CHECK(attachment_cell({4500, 3500}, map) == Cell{6, 8});
  CHECK(attachment_cell({500, 500}, map) == Cell{1, 1});
  CHECK(attachment_node({4500, 3500}, map) == 62);
  CHECK_THROWS_AS(attachment_cell({-0.1, 10}, map), std::domain_error);
  CHECK_THROWS_AS(attachment_cell({10, 3500.1}, map), std::domain_error);
}

TEST_CASE("grid map geometry and validation") {
  const GridMap map = paper_map();
  CHECK(map.node_count() == 63);
  CHECK(map.width_m() == 4500.0);
  CHECK(map.height_m() == 3500.0);
  CHECK(map.diameter_hops() == 14);
  for (NodeId i = 0; i < map.node_count(); ++i) CHECK(map.node_at(map.cell_of(i)) == i);
  CHECK(map.cell_of(10) == Cell{1, 1});
  CHECK_THROWS(GridMap{0, 3, 500, 36}.validate());
  CHECK_THROWS(GridMap{3, 3, 0, 36}.validate());
  CHECK_THROWS(GridMap{3, 3, 500, -1}.validate());
  CHECK_NOTHROW(GridMap{1, 1, 1, 0}.validate());
  const auto nodes = make_nodes(map, 25e9);
  REQUIRE(nodes.size() == 63);
  CHECK(nodes[62].cell == Cell{6, 8});
  CHECK(nodes[5].capacity_cycles_per_s == 25e9);
}

TEST_CASE("hop distance is Manhattan and a metric") {
  CHECK(hop_distance({0, 0}, {0, 0}) == 0);
  CHECK(hop_distance({0, 0}, {2, 3}) == 5);
  CHECK(hop_distance({0, 0}, {6, 8}) == 14);
  std::vector<Cell> cells;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 4; ++c) cells.push_back({r, c});
  for (auto a : cells)
    for (auto b : cells) {
      CHECK(hop_distance(a, b) == hop_distance(b, a));
      CHECK((hop_distance(a, b) == 0) == (a == b));
      for (auto c : cells) CHECK(hop_distance(a, c) <= hop_distance(a, b) + hop_distance(b, c));
    }
}

TEST_CASE("node loads") {
  CHECK(node_loads(PlacementProfile(std::vector<NodeId>{0, 0, 1}), 2) == std::vector<std::size_t>{2, 1});
  CHECK(node_loads(PlacementProfile(), 3) == std::vector<std::size_t>{0, 0, 0});
  CHECK(node_loads(PlacementProfile(5, 0), 3) == std::vector<std::size_t>{5, 0, 0});
  const PlacementProfile p(std::vector<NodeId>{2, 0, 2, 1, 2, 0});
  std::size_t total = 0;
  for (auto l : node_loads(p, 3)) total += l;
  CHECK(total == p.size());
}

TEST_CASE("profile validation") {
  CHECK_NOTHROW(PlacementProfile(std::vector<NodeId>{0, 1}).validate(2, 2));
  CHECK_THROWS(PlacementProfile(std::vector<NodeId>{0, 2}).validate(2, 2));
  CHECK_THROWS(PlacementProfile(std::vector<NodeId>{0}).validate(2, 2));
}

TEST_CASE("computing delay") {
  CHECK(computing_delay(25e9, 1, 25e9) == 1.0);
  // 0.8 Mb/s * 2640 cycles/bit = 2.112e9 cycles; three users share 25e9 cycles/s:
  // 2.112 * 3 / 25 = 6.336 / 25 = 0.25344 s.
  CHECK(computing_delay(2.112e9, 3, 25e9) == doctest::Approx(0.25344).epsilon(1e-14));
  for (std::size_t l = 1; l < 10; ++l)
    CHECK(computing_delay(2e9, l + 1, 25e9) > computing_delay(2e9, l, 25e9));

  const GridMap map{2, 1, 500, 36};
  const auto nodes = make_nodes(map, 10.0);
  const std::vector<double> demands{4.0, 4.0, 2.0};
  const PlacementProfile p(std::vector<NodeId>{1, 1, 0});
  CHECK(computing_delay(0, p, demands, nodes) == computing_delay(1, p, demands, nodes));
  CHECK(computing_delay(0, p, demands, nodes) == doctest::Approx(0.8));
  CHECK(computing_delay(2, p, demands, nodes) == doctest::Approx(0.2));
}

TEST_CASE("communication delay") {
  const GridMap map = paper_map();
  CHECK(communication_delay({3, 3}, {3, 3}, map, 1.2) == 0.0);
  CHECK(communication_delay({0, 0}, {1, 1}, map, 1.0) == doctest::Approx(72.0));
  CHECK(communication_delay({0, 0}, {0, 2}, map, 1.35) == doctest::Approx(97.2));
  CHECK_THROWS_AS(communication_delay({0, 0}, {0, 1}, map, 0.99), std::domain_error);
  CHECK_THROWS_AS(communication_delay({0, 0}, {0, 1}, map, 1.36), std::domain_error);
  CHECK(communication_delay({0, 0}, {0, 3}, map, 1.1) >=
        communication_delay({0, 0}, {0, 2}, map, 1.1));
}

TEST_CASE("migration cost entries") {
  CHECK(migration_cost_entry({2, 2}, {2, 2}, 1.3, 1.0) == 0.0);
  CHECK(migration_cost_entry({0, 0}, {1, 2}, 1.0, 1.0) == doctest::Approx(3.5));
  CHECK(migration_cost_entry({0, 0}, {0, 1}, 1.35, 1.0) == doctest::Approx(2.025));
  CHECK(migration_cost_entry({0, 0}, {0, 1}, 1.0, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("slot migration cost sums movers") {
  SlotCostMatrices m(3, 2);
  m.migration(0, 0, 1) = 3.5;
  m.migration(1, 1, 0) = 1.25;
  m.migration(2, 0, 1) = 7.0;
  const PlacementProfile prev(std::vector<NodeId>{0, 1, 0});
  CHECK(slot_migration_cost(prev, prev, m) == 0.0);
  CHECK(slot_migration_cost(prev, PlacementProfile(std::vector<NodeId>{1, 1, 0}), m) == 3.5);
  CHECK(slot_migration_cost(prev, PlacementProfile(std::vector<NodeId>{1, 0, 0}), m) == 3.5 + 1.25);
}

TEST_CASE("matrix validation") {
  SlotCostMatrices m(1, 2);
  CHECK_NOTHROW(m.validate());
  m.migration(0, 1, 1) = 0.5;
  CHECK_THROWS(m.validate());
  SlotCostMatrices n(1, 2);
  n.comm(0, 1) = -1.0;
  CHECK_THROWS(n.validate());
}

TEST_CASE("built matrices follow the delay and migration formulas") {
  const GridMap map{4, 3, 500, 36};
  const std::vector<Cell> att{{0, 0}, {2, 3}, {1, 2}};
  const std::vector<double> demands{2.112e9, 1.584e9, 2.64e9};
  const std::vector<double> cu{1.0, 1.2, 1.35}, mu{1.1, 1.0, 1.3};
  const auto mats = build_cost_matrices(map, att, demands, cu, mu, 2.112e9);
  CHECK_NOTHROW(mats.validate());
  for (std::size_t k = 0; k < 3; ++k)
    for (NodeId i = 0; i < map.node_count(); ++i) {
      const Cell ci = map.cell_of(i);
      const double hops_att = std::abs(double(ci.row) - double(att[k].row)) +
                              std::abs(double(ci.col) - double(att[k].col));
      CHECK(mats.comm(k, i) == doctest::Approx(hops_att * 36.0 * cu[k]));
      for (NodeId j = 0; j < map.node_count(); ++j) {
        const Cell cj = map.cell_of(j);
        const double hops = std::abs(double(ci.row) - double(cj.row)) +
                            std::abs(double(ci.col) - double(cj.col));
        const double expected = i == j ? 0.0 : (hops + 0.5 * demands[k] / 2.112e9) * mu[k];
        CHECK(mats.migration(k, j, i) == doctest::Approx(expected));
      }
    }
}

TEST_CASE("delay breakdown adds up") {
  const GridMap map{3, 1, 500, 36};
  const auto nodes = make_nodes(map, 25e9);
  const std::vector<Cell> att{{0, 0}, {0, 2}};
  const std::vector<double> demands{2e9, 2.5e9};
  const std::vector<double> u{1.0, 1.0};
  const auto mats = build_cost_matrices(map, att, demands, u, u, 2.112e9);
  const PlacementProfile p(std::vector<NodeId>{1, 1});
  const auto d = delay_breakdown(p, demands, nodes, mats);
  REQUIRE(d.size() == 2);
  CHECK(d[0].computing_s == doctest::Approx(2e9 * 2 / 25e9));
  CHECK(d[0].communication_s == doctest::Approx(36.0));
  CHECK(d[1].total_s == d[1].computing_s + d[1].communication_s);
}
