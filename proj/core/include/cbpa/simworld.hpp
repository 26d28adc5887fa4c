// Deterministic world stepping: unicycle kinematics under a rate-limited
// heading / first-order speed reference tracker, range-limited comms, and
// option-keyed battery integration.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cbpa/graph.hpp"

namespace cbpa::world {

struct VehicleState {
  double x = 0.0;        // m
  double y = 0.0;        // m
  double heading = 0.0;  // degrees, kept in [0, 360)
  double speed = 0.0;    // m/s
  double kappa = 0.0;    // battery exhaustion, fraction in [0, 1]
  int team = 0;
  int option = 0;        // currently selected option index
  bool disabled = false; // kappa hit 1; dropped from the comm graph

  Eigen::Vector2d position() const { return {x, y}; }
};

struct WorldConfig {
  double dt = 0.1;             // s, world step
  double comm_range = 160.0;   // m
  double v_max = 2.0;          // m/s
  double turn_rate_max = 30.0; // deg/s
  double speed_tau = 1.0;      // s, first-order speed lag

  void validate() const;
};

// One kinematic step toward (ref_heading deg, ref_speed m/s). Heading moves
// the short way around, ties (exact 180) to starboard; speed follows a
// first-order lag clamped to [0, v_max]. Position integrates the *updated*
// heading and speed.
VehicleState step_vehicle(const VehicleState& s, double ref_heading, double ref_speed,
                          const WorldConfig& cfg, double dt);

// Edge iff pairwise distance <= comm_range; disabled vehicles are isolated.
graph::Graph comm_graph(const std::vector<VehicleState>& fleet, double comm_range);

// Battery exhaustion integration: rate keyed to the vehicle's option. The
// vehicle is marked disabled once kappa saturates at 1.
VehicleState step_battery(const VehicleState& s, double rate_per_s, double dt);

}  // namespace cbpa::world
