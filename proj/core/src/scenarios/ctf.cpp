#include "cbpa/scenarios/ctf.hpp"

#include <cmath>
#include <stdexcept>

#include "cbpa/hungarian.hpp"
#include "cbpa/ivp.hpp"
#include "cbpa/rng.hpp"

namespace cbpa::scenarios {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

double heading_to(const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
  // Compass convention: 0 = +y, 90 = +x.
  return ivp::wrap_degrees(std::atan2(to.x() - from.x(), to.y() - from.y()) / kDegToRad);
}

Eigen::VectorXd default_direction(const CtfGameState& gs) {
  // Rank own vehicles by proximity to the enemy flag: closer vehicles get a
  // larger share of the attack direction.
  const auto n = static_cast<Eigen::Index>(gs.own.size());
  Eigen::VectorXd score(n);
  for (Eigen::Index i = 0; i < n; ++i)
    score(i) = -(gs.own[static_cast<size_t>(i)].position() - gs.enemy_flag).norm();
  Eigen::VectorXd dir = score.array() - score.mean();
  double nrm = dir.norm();
  if (nrm < 1e-12) {
    // All equidistant: deterministic fallback splitting the first vehicle out.
    dir.setZero();
    dir(0) = 1.0;
    dir.array() -= dir.mean();
    nrm = dir.norm();
  }
  return dir / nrm;
}

double default_magnitude(const CtfGameState& gs) {
  if (gs.own_flag_taken) return -2.0;
  int threats = 0;
  // Own half = the half containing our flag (split along x).
  double mid = 0.5 * (gs.own_flag.x() + gs.enemy_flag.x());
  bool own_left = gs.own_flag.x() < mid;
  for (const auto& e : gs.enemy) {
    bool on_left = e.x < mid;
    if (on_left == own_left) ++threats;
  }
  if (threats == 0) return 1.6;  // settles with two attackers
  return 0.3;                    // settles with one attacker

}

}  // namespace

void CtfConfig::validate() const {
  if (!(field_x1 > field_x0) || !(field_y1 > field_y0))
    throw std::invalid_argument("ctf: degenerate field bounds");
  if (!(tag_radius > 0.0) || !(grab_radius > 0.0))
    throw std::invalid_argument("ctf: radii must be positive");
  if (!(game_duration > 0.0)) throw std::invalid_argument("ctf: game duration must be positive");
}

CtfConfig default_ctf_config() {
  CtfConfig cfg;
  cfg.f_ave = default_magnitude;
  cfg.f_net_direction = default_direction;
  return cfg;
}

std::vector<std::pair<double, double>> ctf_inputs(const CtfGameState& gs, const CtfConfig& cfg) {
  cfg.validate();
  if (gs.own.size() != 3) throw std::invalid_argument("ctf_inputs: team size must be 3");
  auto mag = cfg.f_ave ? cfg.f_ave : default_magnitude;
  auto dir = cfg.f_net_direction ? cfg.f_net_direction : default_direction;

  double f_ave = mag(gs);
  Eigen::VectorXd d = dir(gs);
  if (d.size() != 3) throw std::invalid_argument("ctf: direction rule must return 3 components");
  if (std::fabs(d.sum()) > 1e-9)
    throw std::invalid_argument("ctf: direction must lie in the zero-sum subspace");
  double nrm = d.norm();
  if (nrm < 1e-12) throw std::invalid_argument("ctf: zero direction");
  // Scale so ||f_net|| matches |f_ave|. A non-positive magnitude means a
  // full retreat: the common term alone, applied uniformly, so the
  // mutual-inhibition coupling cannot elect a lone attacker off the
  // direction peak.
  Eigen::VectorXd f_net = f_ave > 0.0 ? Eigen::VectorXd(d * (f_ave / nrm))
                                      : Eigen::VectorXd(Eigen::VectorXd::Zero(3));

  std::vector<std::pair<double, double>> out(3);
  for (int i = 0; i < 3; ++i) {
    double attack = f_ave + f_net(i);
    out[static_cast<size_t>(i)] = {attack, -attack};
  }
  return out;
}

CtfAllocation settle_ctf_allocation(const CtfGameState& gs, const CtfConfig& cfg) {
  auto inputs = ctf_inputs(gs, cfg);

  // Two-option dissensus on the complete team graph: self-reinforcement
  // alpha, mutual inhibition g, attention above the symmetry-breaking
  // threshold so the team splits even under weak input.
  const double d = 1.0, u = 1.2, alpha = 0.5, g = 0.5;
  Eigen::Vector3d z = Eigen::Vector3d::Zero();
  auto rhs = [&](const Eigen::Vector3d& y) {
    Eigen::Vector3d dy;
    for (int i = 0; i < 3; ++i) {
      double social = alpha * y(i);
      for (int k = 0; k < 3; ++k)
        if (k != i) social -= g * y(k);
      dy(i) = -d * y(i) + u * std::tanh(social) + inputs[static_cast<size_t>(i)].first;
    }
    return dy;
  };
  const double dt = 0.02;
  for (int s = 0; s < 3000; ++s) {
    Eigen::Vector3d k1 = rhs(z);
    Eigen::Vector3d k2 = rhs(z + 0.5 * dt * k1);
    Eigen::Vector3d k3 = rhs(z + 0.5 * dt * k2);
    Eigen::Vector3d k4 = rhs(z + dt * k3);
    z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (k1.lpNorm<Eigen::Infinity>() < 1e-9) break;
  }

  CtfAllocation out;
  out.z = z;
  out.attacking = {z(0) > 0.0, z(1) > 0.0, z(2) > 0.0};
  return out;
}

std::vector<DefenderTask> defender_assignment(const std::vector<world::VehicleState>& defenders,
                                              const std::vector<world::VehicleState>& intruders,
                                              double w_dist, double w_heading) {
  if (defenders.empty()) throw std::invalid_argument("defender_assignment: no defenders");
  std::vector<DefenderTask> tasks(defenders.size());
  if (intruders.empty()) return {};

  const auto nd = static_cast<Eigen::Index>(defenders.size());
  const auto ni = static_cast<Eigen::Index>(intruders.size());
  Eigen::MatrixXd cost(nd, ni);
  for (Eigen::Index i = 0; i < nd; ++i) {
    const auto& d = defenders[static_cast<size_t>(i)];
    for (Eigen::Index j = 0; j < ni; ++j) {
      const auto& t = intruders[static_cast<size_t>(j)];
      double dist = (d.position() - t.position()).norm();
      double dh = ivp::circular_distance_deg(d.heading, t.heading);
      cost(i, j) = w_dist * dist + w_heading * dh;
    }
  }
  auto base = assign::min_cost_assignment(cost);

  std::vector<int> rank_counter(intruders.size(), 0);
  for (size_t i = 0; i < defenders.size(); ++i) {
    int j = base.row_to_col[i];
    if (j >= 0) {
      tasks[i] = {j, rank_counter[static_cast<size_t>(j)]++};
    }
  }
  // Surplus defenders back up whichever intruder costs them least, in
  // ascending cost order so nearer backups take lower ranks.
  std::vector<std::pair<double, size_t>> surplus;
  for (size_t i = 0; i < defenders.size(); ++i) {
    if (base.row_to_col[i] >= 0) continue;
    Eigen::Index jb;
    double c = cost.row(static_cast<Eigen::Index>(i)).minCoeff(&jb);
    surplus.push_back({c, i});
    tasks[i].intruder = static_cast<int>(jb);
  }
  std::sort(surplus.begin(), surplus.end());
  for (const auto& [c, i] : surplus) {
    int j = tasks[i].intruder;
    tasks[i].rank = rank_counter[static_cast<size_t>(j)]++;
  }
  return tasks;
}

Eigen::Vector2d intercept_point(const world::VehicleState& intruder, int rank, double lead_base) {
  if (rank < 0) throw std::invalid_argument("intercept_point: negative rank");
  double rad = intruder.heading * kDegToRad;
  Eigen::Vector2d ahead(std::sin(rad), std::cos(rad));
  return intruder.position() + lead_base * (rank + 1) * ahead;
}

namespace {

struct GameSide {
  std::vector<world::VehicleState> fleet;
  Eigen::Vector2d flag;
  std::vector<Eigen::Vector2d> start;
  bool flag_taken = false;  // this side's flag is being carried by the other team
  int carrier = -1;         // index on the *other* team carrying this flag
};

void drive_towards(world::VehicleState& v, const Eigen::Vector2d& goal,
                   const world::WorldConfig& wc, double dt) {
  v = world::step_vehicle(v, heading_to(v.position(), goal), wc.v_max, wc, dt);
}

}  // namespace

CtfScore play_ctf_game(const CtfConfig& cfg_in, std::uint64_t seed, bool use_opinions) {
  CtfConfig cfg = cfg_in;
  if (!cfg.f_ave) cfg.f_ave = default_magnitude;
  if (!cfg.f_net_direction) cfg.f_net_direction = default_direction;
  cfg.validate();

  world::WorldConfig wc;
  wc.v_max = 2.0;
  wc.turn_rate_max = 45.0;
  wc.speed_tau = 0.5;

  const double mid_y = 0.5 * (cfg.field_y0 + cfg.field_y1);
  const double mid_x = 0.5 * (cfg.field_x0 + cfg.field_x1);

  rng::Stream rnd(seed, "ctf-game");
  GameSide blue, red;
  blue.flag = {cfg.field_x0 + 10.0, mid_y};
  red.flag = {cfg.field_x1 - 10.0, mid_y};
  for (int i = 0; i < 3; ++i) {
    // Seed-jittered starts near each flag.
    double dy = (i - 1) * 15.0 + rnd.uniform(-3.0, 3.0);
    world::VehicleState b;
    b.x = blue.flag.x() + 5.0;
    b.y = mid_y + dy;
    b.team = 0;
    blue.start.push_back(b.position());
    blue.fleet.push_back(b);

    world::VehicleState r;
    r.team = 1;
    if (i == 0) {  // scripted attacker starts at the flag line
      r.x = red.flag.x() - 5.0;
      r.y = mid_y + rnd.uniform(-3.0, 3.0);
    } else {  // static defenders screen 20 m out, offset laterally
      r.x = red.flag.x() - 20.0;
      r.y = mid_y + (i == 1 ? 15.0 : -15.0);
    }
    red.start.push_back(r.position());
    red.fleet.push_back(r);
  }

  CtfScore score;
  std::vector<bool> attacking = {true, false, false};
  const double dt = 0.5;
  const auto steps = static_cast<int>(cfg.game_duration / dt);

  for (int s = 0; s < steps; ++s) {
    double t = s * dt;

    // Re-settle the allocation every 5 s for the opinion-driven team.
    if (use_opinions && s % 10 == 0) {
      CtfGameState gs;
      gs.own = blue.fleet;
      gs.enemy = red.fleet;
      gs.own_flag = blue.flag;
      gs.enemy_flag = red.flag;
      gs.own_flag_taken = blue.flag_taken;
      gs.enemy_flag_taken = red.flag_taken;
      gs.t = t;
      attacking = settle_ctf_allocation(gs, cfg).attacking;
      // Never strand a carried flag: the carrier keeps attacking.
      if (red.flag_taken && red.carrier >= 0) attacking[static_cast<size_t>(red.carrier)] = true;
    }

    // Blue attackers run lateral lanes so the approach clears both the
    // enemy screen (flag.x - 20, mid_y +- 15) and the scripted runner on
    // the center line, then cut to the flag along its own x column.
    for (int i = 0; i < 3; ++i) {
      if (!attacking[static_cast<size_t>(i)]) continue;
      auto& v = blue.fleet[static_cast<size_t>(i)];
      double lane = (i % 2 == 0) ? cfg.field_y1 - 10.0 : cfg.field_y0 + 10.0;
      if (red.flag_taken && red.carrier == i) {
        // Exit the way we came in: up the flag column, back along the lane,
        // then straight home once on our own half.
        Eigen::Vector2d goal;
        if (v.x > mid_x + 2.0 && std::fabs(v.y - lane) > 4.0)
          goal = {red.flag.x(), lane};
        else if (v.x > mid_x + 2.0)
          goal = {mid_x, lane};
        else
          goal = blue.flag;
        drive_towards(v, goal, wc, dt);
        if ((v.position() - blue.flag).norm() <= cfg.grab_radius) {
          ++score.captures;
          red.flag_taken = false;
          red.carrier = -1;
        }
      } else {
        Eigen::Vector2d goal;
        if (v.x < mid_x - 2.0)
          goal = {mid_x, lane};
        else if (v.x < red.flag.x() - 3.0)
          goal = {red.flag.x(), lane};
        else
          goal = red.flag;
        drive_towards(v, goal, wc, dt);
        if (!red.flag_taken && (v.position() - red.flag).norm() <= cfg.grab_radius) {
          ++score.grabs;
          red.flag_taken = true;
          red.carrier = i;
        }
      }
    }

    // Blue defenders chase intruders on the blue half.
    std::vector<world::VehicleState> intruders;
    std::vector<size_t> intruder_idx;
    for (size_t j = 0; j < red.fleet.size(); ++j) {
      if (red.fleet[j].x < mid_x) {
        intruders.push_back(red.fleet[j]);
        intruder_idx.push_back(j);
      }
    }
    std::vector<world::VehicleState> defs;
    std::vector<size_t> def_idx;
    for (size_t i = 0; i < 3; ++i) {
      if (!attacking[i]) {
        defs.push_back(blue.fleet[i]);
        def_idx.push_back(i);
      }
    }
    if (!defs.empty() && !intruders.empty()) {
      auto tasks = defender_assignment(defs, intruders, cfg.w_dist, cfg.w_heading);
      for (size_t q = 0; q < tasks.size(); ++q) {
        const auto& tgt = intruders[static_cast<size_t>(tasks[q].intruder)];
        auto goal = intercept_point(tgt, tasks[q].rank, cfg.lead_base);
        drive_towards(blue.fleet[def_idx[q]], goal, wc, dt);
      }
    } else {
      // Station-keep screening own flag.
      for (size_t q = 0; q < defs.size(); ++q) {
        Eigen::Vector2d station = blue.flag + Eigen::Vector2d(15.0, (def_idx[q] == 1 ? 12.0 : -12.0));
        drive_towards(blue.fleet[def_idx[q]], station, wc, dt);
      }
    }

    // Blue tags: any blue vehicle on the blue half tags nearby intruders.
    for (size_t j : intruder_idx) {
      auto& r = red.fleet[j];
      for (size_t i = 0; i < 3; ++i) {
        const auto& b = blue.fleet[i];
        if (b.x < mid_x && (b.position() - r.position()).norm() <= cfg.tag_radius) {
          if (blue.flag_taken && blue.carrier == static_cast<int>(j)) {
            blue.flag_taken = false;
            blue.carrier = -1;
          }
          r.x = red.start[j].x();
          r.y = red.start[j].y();
          r.speed = 0.0;
          break;
        }
      }
    }

    // Scripted red attacker: straight run at the blue flag, home after a grab.
    {
      auto& r = red.fleet[0];
      if (blue.flag_taken && blue.carrier == 0) {
        drive_towards(r, red.flag, wc, dt);
        if ((r.position() - red.flag).norm() <= cfg.grab_radius) {
          blue.flag_taken = false;  // opponent capture; reset and go again
          blue.carrier = -1;
        }
      } else {
        drive_towards(r, blue.flag, wc, dt);
        if (!blue.flag_taken && (r.position() - blue.flag).norm() <= cfg.grab_radius) {
          blue.flag_taken = true;
          blue.carrier = 0;
        }
      }
    }

    // Red tags blue attackers on the red half (static defenders still tag).
    for (size_t i = 0; i < 3; ++i) {
      auto& b = blue.fleet[i];
      if (b.x <= mid_x) continue;
      for (const auto& r : red.fleet) {
        if (r.x > mid_x && (r.position() - b.position()).norm() <= cfg.tag_radius) {
          if (red.flag_taken && red.carrier == static_cast<int>(i)) {
            red.flag_taken = false;
            red.carrier = -1;
          }
          b.x = blue.start[i].x();
          b.y = blue.start[i].y();
          b.speed = 0.0;
          break;
        }
      }
    }
  }
  return score;
}

}  // namespace cbpa::scenarios
