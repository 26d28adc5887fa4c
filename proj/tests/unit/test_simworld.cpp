#include <cmath>

#include "cbpa/simworld.hpp"
#include "doctest.h"

using namespace cbpa::world;

TEST_CASE("holding the reference advances along the heading") {
  WorldConfig cfg;
  cfg.speed_tau = 1e-9;  // effectively instant speed tracking
  VehicleState v;
  v.heading = 90.0;  // due east (compass)
  v.speed = 2.0;
  auto n = step_vehicle(v, 90.0, 2.0, cfg, 0.5);
  CHECK(n.heading == doctest::Approx(90.0));
  CHECK(n.x == doctest::Approx(1.0));
  CHECK(n.y == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("turn rate saturates, 180-degree ties break to starboard") {
  WorldConfig cfg;
  cfg.turn_rate_max = 30.0;
  VehicleState v;
  v.heading = 0.0;
  auto n = step_vehicle(v, 180.0, 0.0, cfg, 1.0);
  CHECK(n.heading == doctest::Approx(30.0));  // clockwise = starboard

  v.heading = 0.0;
  n = step_vehicle(v, 20.0, 0.0, cfg, 1.0);
  CHECK(n.heading == doctest::Approx(20.0));  // within the cap: snap

  v.heading = 10.0;
  n = step_vehicle(v, 350.0, 0.0, cfg, 1.0);
  CHECK(n.heading == doctest::Approx(350.0));  // short way through north
}

TEST_CASE("straight run integrates distance exactly") {
  WorldConfig cfg;
  cfg.speed_tau = 1e-9;
  VehicleState v;
  v.heading = 0.0;
  v.speed = 2.0;
  for (int s = 0; s < 100; ++s) v = step_vehicle(v, 0.0, 2.0, cfg, 0.1);
  CHECK(v.y == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(v.x == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("speed follows a first-order lag and clamps to v_max") {
  WorldConfig cfg;
  cfg.speed_tau = 1.0;
  cfg.v_max = 2.0;
  VehicleState v;
  auto n = step_vehicle(v, 0.0, 2.0, cfg, 0.1);
  CHECK(n.speed == doctest::Approx(2.0 * (1.0 - std::exp(-0.1))));
  n = step_vehicle(v, 0.0, 99.0, cfg, 10.0);
  CHECK(n.speed <= cfg.v_max);
}

TEST_CASE("disabled vehicles do not move") {
  WorldConfig cfg;
  VehicleState v;
  v.disabled = true;
  v.speed = 2.0;
  auto n = step_vehicle(v, 0.0, 2.0, cfg, 1.0);
  CHECK(n.x == v.x);
  CHECK(n.y == v.y);
  CHECK(n.speed == 0.0);
}

TEST_CASE("comm graph by range") {
  auto at = [](double x, double y) {
    VehicleState v;
    v.x = x;
    v.y = y;
    return v;
  };
  CHECK(comm_graph({at(0, 0), at(100, 0)}, 160.0).has_edge(0, 1));
  CHECK(!comm_graph({at(0, 0), at(200, 0)}, 160.0).has_edge(0, 1));

  // Eight vehicles on a 150 m line with 160 m range: a chain.
  std::vector<VehicleState> line;
  for (int i = 0; i < 8; ++i) line.push_back(at(150.0 * i, 0.0));
  auto g = comm_graph(line, 160.0);
  CHECK(g.edges().size() == 7);
  for (int i = 0; i + 1 < 8; ++i) CHECK(g.has_edge(i, i + 1));
  CHECK(!g.has_edge(0, 2));

  // Disabled vehicles are isolated.
  line[3].disabled = true;
  auto g2 = comm_graph(line, 160.0);
  CHECK(g2.degree(3) == 0);
}

TEST_CASE("battery integrates, clamps, and disables") {
  VehicleState v;
  auto n = v;
  for (int s = 0; s < 1000; ++s) n = step_battery(n, 0.0005, 0.1);
  CHECK(n.kappa == doctest::Approx(0.05));
  CHECK(!n.disabled);

  n.kappa = 0.999;
  n = step_battery(n, 0.5, 10.0);
  CHECK(n.kappa == 1.0);
  CHECK(n.disabled);
  CHECK(n.speed == 0.0);

  CHECK_THROWS_AS(step_battery(v, -0.1, 1.0), std::invalid_argument);
}
