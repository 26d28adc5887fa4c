#include "cbpa/simworld.hpp"

#include <cmath>
#include <stdexcept>

#include "cbpa/ivp.hpp"

namespace cbpa::world {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

void WorldConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("world: dt must be positive");
  if (!(comm_range > 0.0)) throw std::invalid_argument("world: comm_range must be positive");
  if (!(v_max > 0.0) || !(turn_rate_max > 0.0) || !(speed_tau > 0.0))
    throw std::invalid_argument("world: kinematic limits must be positive");
}

VehicleState step_vehicle(const VehicleState& s, double ref_heading, double ref_speed,
                          const WorldConfig& cfg, double dt) {
  VehicleState out = s;
  if (out.disabled) {
    out.speed = 0.0;
    return out;
  }

  // Signed shortest rotation in (-180, 180]; an exact 180 tie turns to
  // starboard (positive, clockwise in compass convention).
  double err = ivp::wrap_degrees(ref_heading) - ivp::wrap_degrees(s.heading);
  if (err > 180.0) err -= 360.0;
  if (err <= -180.0) err += 360.0;
  double max_turn = cfg.turn_rate_max * dt;
  double turn = std::clamp(err, -max_turn, max_turn);
  out.heading = ivp::wrap_degrees(s.heading + turn);

  double target = std::clamp(ref_speed, 0.0, cfg.v_max);
  double alpha = 1.0 - std::exp(-dt / cfg.speed_tau);
  out.speed = std::clamp(s.speed + alpha * (target - s.speed), 0.0, cfg.v_max);

  // Compass heading: 0 = +y (north), 90 = +x (east).
  double rad = out.heading * kDegToRad;
  out.x = s.x + out.speed * std::sin(rad) * dt;
  out.y = s.y + out.speed * std::cos(rad) * dt;
  return out;
}

graph::Graph comm_graph(const std::vector<VehicleState>& fleet, double comm_range) {
  if (fleet.empty()) throw std::invalid_argument("comm_graph: empty fleet");
  std::vector<std::pair<int, int>> edges;
  const int n = static_cast<int>(fleet.size());
  for (int i = 0; i < n; ++i) {
    if (fleet[static_cast<size_t>(i)].disabled) continue;
    for (int j = i + 1; j < n; ++j) {
      if (fleet[static_cast<size_t>(j)].disabled) continue;
      double dx = fleet[static_cast<size_t>(i)].x - fleet[static_cast<size_t>(j)].x;
      double dy = fleet[static_cast<size_t>(i)].y - fleet[static_cast<size_t>(j)].y;
      if (std::hypot(dx, dy) <= comm_range) edges.emplace_back(i, j);
    }
  }
  return graph::Graph(n, edges);
}

VehicleState step_battery(const VehicleState& s, double rate_per_s, double dt) {
  if (rate_per_s < 0.0) throw std::invalid_argument("step_battery: negative rate");
  VehicleState out = s;
  out.kappa = std::min(1.0, s.kappa + rate_per_s * dt);
  if (out.kappa >= 1.0) {
    out.kappa = 1.0;
    out.disabled = true;
    out.speed = 0.0;
  }
  return out;
}

}  // namespace cbpa::world
