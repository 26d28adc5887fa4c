// Capture-the-flag scenario: a three-vehicle team splits attack/defend via
// two-option dissensus, where the input magnitude sets how many attack and
// its direction in the zero-sum subspace selects which vehicles do.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cbpa/simworld.hpp"

namespace cbpa::scenarios {

struct CtfGameState {
  std::vector<world::VehicleState> own;    // this team, size 3
  std::vector<world::VehicleState> enemy;  // opposing team, size 3
  Eigen::Vector2d own_flag = {0.0, 0.0};
  Eigen::Vector2d enemy_flag = {0.0, 0.0};
  bool own_flag_taken = false;
  bool enemy_flag_taken = false;
  double t = 0.0;  // s into the game
};

struct CtfConfig {
  double field_x0 = 0.0, field_y0 = 0.0, field_x1 = 160.0, field_y1 = 80.0;
  double tag_radius = 10.0;    // m
  double grab_radius = 10.0;   // m
  double game_duration = 600.0;  // s
  double lead_base = 10.0;     // m, interception lead per rank step
  double w_dist = 1.0;         // defender assignment: distance weight (per m)
  double w_heading = 0.5;      // defender assignment: heading-difference weight (per deg)

  // Input magnitude schedule; the default pushes hard negative (all defend)
  // when the own flag is taken and a moderate positive otherwise.
  std::function<double(const CtfGameState&)> f_ave;
  // Direction rule: a unit vector in the zero-sum subspace {x : sum x = 0}
  // picking which vehicles attack. The default points at the vehicle
  // closest to the enemy flag.
  std::function<Eigen::VectorXd(const CtfGameState&)> f_net_direction;

  void validate() const;
};

CtfConfig default_ctf_config();

// Per-agent (f_attack, f_defend) input pairs: f_attack_i = f_ave + f_net_i
// with ||f_net||_2 = f_ave when f_ave > 0 and f_net = 0 otherwise (uniform
// retreat), f_defend = -f_attack. Deterministic in the game state.
std::vector<std::pair<double, double>> ctf_inputs(const CtfGameState& gs, const CtfConfig& cfg);

// Settles the two-option dissensus on a complete team graph and reports who
// attacks (positive settled opinion).
struct CtfAllocation {
  Eigen::VectorXd z;              // settled attack-vs-defend scalar opinions
  std::vector<bool> attacking;
};
CtfAllocation settle_ctf_allocation(const CtfGameState& gs, const CtfConfig& cfg);

struct DefenderTask {
  int intruder = -1;  // index into the intruder list
  int rank = 0;       // 0 = primary interceptor, higher = backup
};

// Assigns defenders to intruders minimizing w_dist*distance +
// w_heading*heading-difference via optimal assignment; surplus defenders
// back up their nearest intruder with incremented rank. Empty when there
// are no intruders.
std::vector<DefenderTask> defender_assignment(const std::vector<world::VehicleState>& defenders,
                                              const std::vector<world::VehicleState>& intruders,
                                              double w_dist, double w_heading);

// Lead point ahead of the intruder along its heading, further out for
// higher-rank (backup) defenders.
Eigen::Vector2d intercept_point(const world::VehicleState& intruder, int rank, double lead_base);

struct CtfScore {
  int grabs = 0;     // enemy flag reached
  int captures = 0;  // flag carried home
};

// One full simulated game of the opinion-driven team against a scripted
// fixed-role opponent (one straight-line attacker, two static defenders).
// use_opinions=false ablates the allocation to fixed roles for the paired
// comparison. Deterministic in the seed.
CtfScore play_ctf_game(const CtfConfig& cfg, std::uint64_t seed, bool use_opinions);

}  // namespace cbpa::scenarios
