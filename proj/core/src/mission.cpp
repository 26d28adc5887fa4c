#include "cbpa/mission.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "cbpa/census_opt.hpp"
#include "cbpa/hungarian.hpp"
#include "cbpa/ivp.hpp"
#include "cbpa/nod.hpp"
#include "cbpa/rng.hpp"
#include "cbpa/scenarios/ctf.hpp"
#include "cbpa/scenarios/hvu.hpp"
#include "cbpa/scenarios/seek_sample.hpp"
#include "cbpa/simworld.hpp"

namespace cbpa::mission {

using json = trace::json;

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

double heading_to(const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
  return ivp::wrap_degrees(std::atan2(to.x() - from.x(), to.y() - from.y()) / kDegToRad);
}

// Steering through the behavior optimizer: every option maps to a transit
// behavior toward its goal at its preferred speed.
struct OptionGoal {
  Eigen::Vector2d goal;
  double speed = 2.0;
};

std::pair<double, double> solve_steering(const world::VehicleState& v,
                                         const std::vector<OptionGoal>& goals,
                                         const Eigen::VectorXd& zv, double v_max) {
  ivp::DecisionDomain domain({{"heading", 0.0, 345.0, 15.0}, {"speed", 0.0, v_max, v_max / 4.0}});
  std::vector<ivp::Behavior> behaviors;
  for (const auto& g : goals) {
    double bearing = heading_to(v.position(), g.goal);
    double want = g.speed;
    behaviors.push_back({"transit",
                         [bearing, want, v_max](const std::vector<double>& p) {
                           double align = 1.0 - ivp::circular_distance_deg(p[0], bearing) / 180.0;
                           double pace = 1.0 - std::fabs(p[1] - want) / v_max;
                           return 2.0 * align + pace;
                         },
                         1.0});
  }
  ivp::OptionBehaviorMap map;
  map.a_c = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(goals.size()),
                                      static_cast<Eigen::Index>(goals.size()));
  auto active = ivp::active_behaviors(zv, map, behaviors);
  std::vector<ivp::Behavior> act;
  for (int q : active) act.push_back(behaviors[static_cast<size_t>(q)]);
  auto p = ivp::solve(domain, act);
  return {p[0], p[1]};
}

// ---------------------------------------------------------------- HVU ----

trace::TraceBundle run_hvu(const config::RunConfig& cfg, std::uint64_t seed) {
  const int n = cfg.integer("hvu.n_vehicles");
  if (n < 2) throw std::invalid_argument("hvu mission needs at least 2 vehicles");

  scenarios::HvuConfig hc;
  hc.patrol_radius = cfg.num("hvu.patrol_radius");
  hc.loiter_radius = cfg.num("hvu.loiter_radius");
  hc.f_intcpt_max = cfg.num("hvu.f_intcpt_max");
  hc.j_min = cfg.num("hvu.j_min");
  hc.j_max = cfg.num("hvu.j_max");
  hc.eta1 = cfg.num("hvu.eta1");
  hc.eta2 = cfg.num("hvu.eta2");
  hc.xi_active = cfg.num("hvu.xi_active");
  hc.xi_loiter = cfg.num("hvu.xi_loiter");
  hc.comp_rate = cfg.num("hvu.comp_rate");
  hc.comp_inhibition = cfg.num("hvu.comp_inhibition");
  hc.comp_half_energy = cfg.num("hvu.comp_half_energy");
  hc.comp_commit_scale = cfg.num("hvu.comp_commit_scale");
  hc.comp_t_max = cfg.num("hvu.comp_t_max");
  hc.comp_dt = cfg.num("hvu.comp_dt");
  hc.validate();

  world::WorldConfig wc;
  wc.dt = cfg.num("world.dt");
  wc.comm_range = cfg.num("world.comm_range");
  wc.v_max = cfg.num("world.v_max");
  wc.turn_rate_max = cfg.num("world.turn_rate_max");
  wc.speed_tau = cfg.num("world.speed_tau");
  wc.validate();

  const double duration = cfg.num("duration");
  const bool static_alloc = cfg.flag("hvu.static_allocation");
  const double burden_gain = cfg.num("hvu.burden_gain");
  const double kappa_spread = cfg.num("hvu.kappa_spread");
  const int n_intrusions = cfg.integer("hvu.n_intrusions");
  const double intrusion_duration = cfg.num("hvu.intrusion_duration");
  const int substeps = cfg.integer("nod.substeps");
  const double d_nod = cfg.num("nod.d");
  const double u_nod = cfg.num("nod.u");
  const double alpha_nod = cfg.num("nod.alpha");
  const double gamma_nod = cfg.num("nod.gamma");

  rng::Stream rnd(seed, "hvu-mission");

  std::vector<world::VehicleState> fleet(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double ang = 360.0 * i / n;
    auto& v = fleet[static_cast<size_t>(i)];
    v.x = hc.patrol_radius * std::sin(ang * kDegToRad);
    v.y = hc.patrol_radius * std::cos(ang * kDegToRad);
    v.heading = ivp::wrap_degrees(ang + 90.0);
    // Deterministic initial exhaustion spread, identical across ablations.
    v.kappa = (n > 1) ? kappa_spread * i / (n - 1) : 0.0;
  }

  // Scripted intrusions, evenly spaced, position drawn once per event.
  struct Intrusion {
    double t_start, t_end;
    Eigen::Vector2d pos;
  };
  std::vector<Intrusion> intrusions;
  for (int j = 0; j < n_intrusions; ++j) {
    double t0 = duration * (j + 1) / (n_intrusions + 1);
    double ang = rnd.uniform(0.0, 360.0) * kDegToRad;
    double r = hc.patrol_radius * 1.2;
    intrusions.push_back({t0, t0 + intrusion_duration, {r * std::sin(ang), r * std::cos(ang)}});
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);  // patrol-vs-loiter opinion
  std::vector<bool> intercepting(static_cast<size_t>(n), false);
  int active_intrusion = -1;

  trace::TraceBundle bundle;
  json variance_series = json::array();
  int alloc_matches = 0, alloc_events = 0;

  const auto steps = static_cast<int>(std::round(duration / wc.dt));
  const auto alloc_steps =
      std::max(1, static_cast<int>(std::round(cfg.num("hvu.alloc_period") / wc.dt)));
  const auto params = nod::AgentParams::homogeneous(n, 2, d_nod, u_nod);
  const Eigen::VectorXd alpha_vec = Eigen::VectorXd::Constant(n, alpha_nod);

  for (int s = 0; s < steps; ++s) {
    double t = s * wc.dt;

    auto g = world::comm_graph(fleet, wc.comm_range);
    auto [adj, lap] = graph::adjacency_and_laplacian(g);

    // Intrusion window transitions.
    std::vector<Eigen::Vector2d> targets;
    for (size_t j = 0; j < intrusions.size(); ++j) {
      const auto& ev = intrusions[j];
      if (t < ev.t_start || t >= ev.t_end) continue;
      targets.push_back(ev.pos);
      if (active_intrusion != static_cast<int>(j)) {
        active_intrusion = static_cast<int>(j);
        // Settle the intercept competition once at window start and compare
        // against the centralized pick for the emergent k.
        Eigen::VectorXd costs(n), f_int(n);
        for (int i = 0; i < n; ++i) {
          costs(i) = scenarios::intercept_cost(fleet[static_cast<size_t>(i)].position(),
                                               {ev.pos}, hc.eta2);
          f_int(i) = scenarios::intercept_input(costs(i), hc);
        }
        auto alloc = scenarios::settle_intercept_allocation(f_int, g, hc);
        auto oracle = scenarios::centralized_intercept_oracle(costs, alloc.count);
        std::vector<int> settled;
        for (int i = 0; i < n; ++i)
          if (alloc.intercepting[static_cast<size_t>(i)]) settled.push_back(i);
        bool match = settled == oracle;
        ++alloc_events;
        if (match) ++alloc_matches;
        intercepting = alloc.intercepting;
        bundle.events.push_back({t, "intrusion",
                                 json{{"index", j},
                                      {"settled", settled},
                                      {"oracle", oracle},
                                      {"k", alloc.count},
                                      {"match", match}}});
      }
    }
    if (targets.empty() && active_intrusion >= 0) {
      active_intrusion = -1;
      std::fill(intercepting.begin(), intercepting.end(), false);
    }

    // Battery-burden inputs and opinion substeps (dissensus split).
    Eigen::VectorXd kappa(n);
    std::vector<Eigen::Vector2d> positions;
    for (int i = 0; i < n; ++i) {
      kappa(i) = fleet[static_cast<size_t>(i)].kappa;
      positions.push_back(fleet[static_cast<size_t>(i)].position());
    }
    auto inputs = scenarios::hvu_allocation_step(positions, kappa, targets, hc);
    // Common offsets do not change a dissensus split; center and scale the
    // patrol input so it competes with the coupling term.
    Eigen::VectorXd b = burden_gain * (inputs.f_patrol.array() - inputs.f_patrol.mean()).matrix();
    // A settled split is sticky: the basin is far deeper than the burden
    // bias, so roles would never rotate as batteries drift apart. Re-settle
    // from neutral every allocation period and let the bias re-sort agents.
    if (s % alloc_steps == 0) z.setZero();
    Eigen::MatrixXd gamma = gamma_nod * adj;
    double h = wc.dt / substeps;
    for (int q = 0; q < substeps; ++q) {
      auto rhs = [&](const Eigen::VectorXd& y) {
        return nod::two_option_rhs(y, alpha_vec, gamma, params, b);
      };
      Eigen::VectorXd k1 = rhs(z), k2 = rhs(z + 0.5 * h * k1), k3 = rhs(z + 0.5 * h * k2),
                      k4 = rhs(z + h * k3);
      z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    // Option readout, steering, kinematics, battery.
    for (int i = 0; i < n; ++i) {
      auto& v = fleet[static_cast<size_t>(i)];
      bool icpt = intercepting[static_cast<size_t>(i)] && !targets.empty();
      bool patrol = static_alloc ? (i < n / 2) : (z(i) > 0.0);
      int option = icpt ? 2 : (patrol ? 0 : 1);

      double bearing = std::atan2(v.x, v.y) / kDegToRad;  // angle on the ring
      Eigen::Vector2d patrol_goal{
          hc.patrol_radius * std::sin((bearing + 20.0) * kDegToRad),
          hc.patrol_radius * std::cos((bearing + 20.0) * kDegToRad)};
      Eigen::Vector2d loiter_goal{hc.loiter_radius * std::sin(bearing * kDegToRad),
                                  hc.loiter_radius * std::cos(bearing * kDegToRad)};
      Eigen::Vector2d icpt_goal = targets.empty() ? patrol_goal : targets.front();

      Eigen::Vector3d zv(option == 0 ? 1.0 : -1.0, option == 1 ? 1.0 : -1.0,
                         option == 2 ? 1.0 : -1.0);
      auto [rh, rs] = solve_steering(
          v, {{patrol_goal, wc.v_max}, {loiter_goal, wc.v_max / 4.0}, {icpt_goal, wc.v_max}},
          zv, wc.v_max);
      v.option = option;
      v = world::step_vehicle(v, rh, rs, wc, wc.dt);
      v = world::step_battery(v, option == 1 ? hc.xi_loiter : hc.xi_active, wc.dt);

      bundle.rows.push_back({t, i, v.x, v.y, v.heading, v.speed, v.kappa,
                             std::vector<double>{z(i), -z(i)}, u_nod, option, rh, rs});
    }

    if (s % std::max(1, static_cast<int>(60.0 / wc.dt)) == 0)
      variance_series.push_back(json{{"t", t}, {"variance", census::burden_variance(kappa)}});
  }

  Eigen::VectorXd kappa_final(n);
  for (int i = 0; i < n; ++i) kappa_final(i) = fleet[static_cast<size_t>(i)].kappa;
  bundle.metrics = json{{"scenario", "hvu"},
                        {"burden_variance", census::burden_variance(kappa_final)},
                        {"variance_series", variance_series},
                        {"allocation_events", alloc_events},
                        {"allocation_matches", alloc_matches}};
  return bundle;
}

// ---------------------------------------------------------------- seek ----

struct Zone {
  scenarios::GridBelief belief;
  std::vector<scenarios::CellIndex> cells;
  std::vector<double> truth;  // row-major true field
  double x0;                  // west edge
};

trace::TraceBundle run_seek(const config::RunConfig& cfg, std::uint64_t seed) {
  const int n = cfg.integer("seek.n_agents");
  const int zc = cfg.integer("seek.zone_cells");
  const double cell = cfg.num("seek.cell_size");
  const double gap = cfg.num("seek.zone_gap");
  const int n_hot = cfg.integer("seek.n_hotspots");
  const double duration = cfg.num("duration");
  const bool use_alloc = cfg.flag("seek.use_allocation");
  const double t_mig = cfg.num("seek.migrate_time") * duration;

  scenarios::SeekSampleConfig sc;
  sc.search_depth = cfg.integer("seek.search_depth");
  sc.beta = cfg.num("seek.beta");
  sc.gamma_t = cfg.num("seek.gamma_t");
  sc.b_mig = cfg.num("seek.b_mig");
  sc.detect_threshold = cfg.num("seek.detect_threshold");
  const double decay = cfg.num("seek.decay_rate");
  const double eta10 = cfg.num("seek.eta10");
  const double eta11 = cfg.num("seek.eta11");
  const double eta12 = cfg.num("seek.eta12");

  world::WorldConfig wc;
  wc.dt = cfg.num("world.dt");
  wc.comm_range = cfg.num("world.comm_range");
  wc.v_max = cfg.num("world.v_max");
  wc.turn_rate_max = cfg.num("world.turn_rate_max");
  wc.speed_tau = cfg.num("world.speed_tau");
  wc.validate();

  rng::Stream rnd(seed, "seek-mission");

  const double zone_w = zc * cell;
  std::vector<Zone> zones;
  for (int zi = 0; zi < 2; ++zi) {
    double x0 = zi * (zone_w + gap);
    Zone z{scenarios::GridBelief(zc, zc, cell, x0, 0.0, decay), {}, {}, x0};
    for (int cy = 0; cy < zc; ++cy)
      for (int cx = 0; cx < zc; ++cx) z.cells.push_back({cx, cy});
    z.truth.assign(static_cast<size_t>(zc) * static_cast<size_t>(zc), 0.0);
    // Hotspots first (distinct cells), background noise elsewhere.
    std::vector<size_t> hot;
    while (hot.size() < static_cast<size_t>(n_hot)) {
      size_t c = rnd.next_below(z.truth.size());
      if (std::find(hot.begin(), hot.end(), c) == hot.end()) hot.push_back(c);
    }
    for (size_t c = 0; c < z.truth.size(); ++c) {
      double bg = rnd.uniform(0.0, 0.4);
      z.truth[c] = std::find(hot.begin(), hot.end(), c) != hot.end() ? 1.0 : bg;
    }
    zones.push_back(std::move(z));
  }

  std::vector<world::VehicleState> fleet(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& v = fleet[static_cast<size_t>(i)];
    v.x = -5.0;
    v.y = zone_w * (i + 0.5) / n;
    v.heading = 90.0;
  }

  scenarios::SampleTaskSet tasks;
  std::vector<int> task_zone;  // provenance of each task for the metric
  std::vector<int> goal_task(static_cast<size_t>(n), -1);

  nod::OpinionState op;
  op.z = Eigen::MatrixXd::Zero(n, 3);  // search, sample, migrate
  auto params = nod::AgentParams::homogeneous(n, 3, cfg.num("nod.d"), cfg.num("nod.u"));
  const int substeps = cfg.integer("nod.substeps");

  auto zone_of = [&](const world::VehicleState& v) {
    // An agent belongs to zone 1 once it crosses the midpoint of the gap.
    return (v.x > zone_w + gap / 2.0) ? 1 : 0;
  };

  trace::TraceBundle bundle;
  std::vector<int> option(static_cast<size_t>(n), 0);
  std::vector<Eigen::Vector2d> goal(static_cast<size_t>(n), Eigen::Vector2d::Zero());

  const auto steps = static_cast<int>(std::round(duration / wc.dt));
  const int alloc_every = std::max(1, static_cast<int>(5.0 / wc.dt));

  for (int s = 0; s < steps; ++s) {
    double t = s * wc.dt;

    // Perception: each agent measures its own cell; detections spawn tasks.
    for (int zi = 0; zi < 2; ++zi) {
      std::vector<scenarios::CellObservation> obs;
      for (int i = 0; i < n; ++i) {
        const auto& v = fleet[static_cast<size_t>(i)];
        if (zone_of(v) != zi) continue;
        auto c = zones[static_cast<size_t>(zi)].belief.cell_at(v.position());
        if (!zones[static_cast<size_t>(zi)].belief.in_bounds(c)) continue;
        double phi =
            zones[static_cast<size_t>(zi)].truth[static_cast<size_t>(c.cy) * zc + c.cx];
        obs.push_back({c, phi, 0.01, false});
        if (phi >= sc.detect_threshold) {
          auto loc = zones[static_cast<size_t>(zi)].belief.cell_center(c);
          bool known = false;
          for (const auto& p : tasks.locations)
            if ((p - loc).norm() < 1e-6) known = true;
          if (!known) {
            tasks.add(loc);
            task_zone.push_back(zi);
            bundle.events.push_back({t, "detection", json{{"x", loc.x()}, {"y", loc.y()}}});
          }
        }
      }
      zones[static_cast<size_t>(zi)].belief.update(obs, wc.dt);
    }

    // Allocation.
    if (s % alloc_every == 0) {
      auto open_tasks = tasks.open();
      std::vector<Eigen::Vector2d> positions;
      for (const auto& v : fleet) positions.push_back(v.position());

      if (use_alloc) {
        Eigen::MatrixXd b(n, 3);
        for (int i = 0; i < n; ++i) {
          int zi = zone_of(fleet[static_cast<size_t>(i)]);
          const auto& zn = zones[static_cast<size_t>(zi)];
          b(i, 0) = eta10 * scenarios::search_input(zn.belief, positions, static_cast<size_t>(i),
                                                    zn.cells, sc);
          b(i, 1) = eta11 * scenarios::sample_input(tasks, positions, static_cast<size_t>(i));
          bool detected = t >= t_mig && zi == 0;
          b(i, 2) = eta12 * scenarios::migrate_input(detected, sc);
        }
        params.b = b;

        auto g = world::comm_graph(fleet, wc.comm_range);
        auto [adj, lap] = graph::adjacency_and_laplacian(g);
        // Role options compete (dissensus); the migrate option recruits
        // (cooperative) so a detection can cascade through the fleet.
        auto tensor = nod::AdjacencyTensor::homogeneous(adj, 3, -0.3, 0.15, 0.4, -0.2);
        for (int i = 0; i < n; ++i)
          for (int k : g.neighbors(i)) tensor.entry(i, k, 2, 2) = 0.4;

        double h = wc.dt * alloc_every / (10.0 * substeps);
        for (int q = 0; q < 10 * substeps; ++q) {
          auto rhs = [&](const Eigen::MatrixXd& zz) {
            nod::OpinionState st{zz};
            return nod::nod_rhs(st, params, tensor);
          };
          Eigen::MatrixXd k1 = rhs(op.z), k2 = rhs(op.z + 0.5 * h * k1),
                          k3 = rhs(op.z + 0.5 * h * k2), k4 = rhs(op.z + h * k3);
          op.z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          op.z = nod::project_rows_zero_sum(op.z);
        }
        for (int i = 0; i < n; ++i) option[static_cast<size_t>(i)] = nod::strongest_option(op.z.row(i));

        // Distinct task assignment for the samplers.
        std::fill(goal_task.begin(), goal_task.end(), -1);
        std::vector<int> samplers, open_idx;
        for (int i = 0; i < n; ++i)
          if (option[static_cast<size_t>(i)] == 1) samplers.push_back(i);
        for (size_t j = 0; j < tasks.locations.size(); ++j)
          if (!tasks.completed[j]) open_idx.push_back(static_cast<int>(j));
        if (!samplers.empty() && !open_idx.empty()) {
          Eigen::MatrixXd cost(static_cast<Eigen::Index>(samplers.size()),
                               static_cast<Eigen::Index>(open_idx.size()));
          for (size_t r = 0; r < samplers.size(); ++r)
            for (size_t c = 0; c < open_idx.size(); ++c)
              cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                  (positions[static_cast<size_t>(samplers[r])] -
                   tasks.locations[static_cast<size_t>(open_idx[c])])
                      .norm();
          auto a = assign::min_cost_assignment(cost);
          for (size_t r = 0; r < samplers.size(); ++r) {
            int c = a.row_to_col[r];
            if (c >= 0) {
              goal_task[static_cast<size_t>(samplers[r])] = open_idx[static_cast<size_t>(c)];
              tasks.claimed[static_cast<size_t>(open_idx[static_cast<size_t>(c)])] = true;
            } else {
              option[static_cast<size_t>(samplers[r])] = 0;  // surplus sampler searches
            }
          }
        } else {
          for (int i : samplers) option[static_cast<size_t>(i)] = 0;  // nothing to sample
        }
      } else {
        // Ablation: no coordination. Everyone greedily samples the nearest
        // open task (duplicating effort), searches the global best cell
        // otherwise, and migrates on the broadcast signal.
        std::fill(goal_task.begin(), goal_task.end(), -1);
        for (int i = 0; i < n; ++i) {
          const auto& v = fleet[static_cast<size_t>(i)];
          int zi = zone_of(v);
          if (t >= t_mig && zi == 0) {
            option[static_cast<size_t>(i)] = 2;
          } else if (!open_tasks.empty()) {
            option[static_cast<size_t>(i)] = 1;
            int best = -1;
            double bd = std::numeric_limits<double>::infinity();
            for (size_t j = 0; j < tasks.locations.size(); ++j) {
              if (tasks.completed[j]) continue;
              double d = (tasks.locations[j] - v.position()).norm();
              if (d < bd) {
                bd = d;
                best = static_cast<int>(j);
              }
            }
            goal_task[static_cast<size_t>(i)] = best;
            if (best >= 0) tasks.claimed[static_cast<size_t>(best)] = true;
          } else {
            option[static_cast<size_t>(i)] = 0;
          }
        }
      }

      // Search goals.
      for (int i = 0; i < n; ++i) {
        if (option[static_cast<size_t>(i)] != 0) continue;
        const auto& v = fleet[static_cast<size_t>(i)];
        int zi = zone_of(v);
        const auto& zn = zones[static_cast<size_t>(zi)];
        double best = -1.0;
        Eigen::Vector2d bg = zn.belief.cell_center({zc / 2, zc / 2});
        for (const auto& c : zn.cells) {
          auto center = zn.belief.cell_center(c);
          if (use_alloc) {
            // Keep searchers apart: skip cells some other searcher is
            // strictly closer to.
            bool mine = true;
            for (int k = 0; k < n; ++k) {
              if (k == i || option[static_cast<size_t>(k)] != 0) continue;
              if (zone_of(fleet[static_cast<size_t>(k)]) != zi) continue;
              double dk = (fleet[static_cast<size_t>(k)].position() - center).norm();
              double di = (v.position() - center).norm();
              if (dk < di || (dk == di && k < i)) {
                mine = false;
                break;
              }
            }
            if (!mine) continue;
          }
          double dist = (center - v.position()).norm();
          double hops = std::max(1.0, std::round(dist / cell));
          double val = std::pow(sc.gamma_t, hops) *
                       (zn.belief.mean(c) + sc.beta * std::sqrt(zn.belief.variance(c)));
          if (val > best) {
            best = val;
            bg = center;
          }
        }
        goal[static_cast<size_t>(i)] = bg;
      }
    }

    // Actuation and bookkeeping.
    for (int i = 0; i < n; ++i) {
      auto& v = fleet[static_cast<size_t>(i)];
      int opt = option[static_cast<size_t>(i)];
      Eigen::Vector2d dst = goal[static_cast<size_t>(i)];
      if (opt == 1 && goal_task[static_cast<size_t>(i)] >= 0)
        dst = tasks.locations[static_cast<size_t>(goal_task[static_cast<size_t>(i)])];
      if (opt == 2)
        dst = {zones[1].x0 + zone_w / 2.0, zone_w / 2.0};

      v.option = opt;
      v = world::step_vehicle(v, heading_to(v.position(), dst), wc.v_max, wc, wc.dt);

      if (opt == 1) {
        int tj = goal_task[static_cast<size_t>(i)];
        if (tj >= 0 && !tasks.completed[static_cast<size_t>(tj)] &&
            (v.position() - tasks.locations[static_cast<size_t>(tj)]).norm() < 0.6 * cell) {
          tasks.completed[static_cast<size_t>(tj)] = true;
          goal_task[static_cast<size_t>(i)] = -1;
          bundle.events.push_back({t, "sampled", json{{"task", tj}}});
        }
      }

      bundle.rows.push_back({t, i, v.x, v.y, v.heading, v.speed, v.kappa,
                             {op.z(i, 0), op.z(i, 1), op.z(i, 2)}, params.u(i), opt,
                             0.0, 0.0});
    }
  }

  // Metric: fraction of true sample sites never completed (undetected sites
  // count as unsampled).
  int total_hot = 0, sampled_hot = 0;
  for (int zi = 0; zi < 2; ++zi) {
    const auto& zn = zones[static_cast<size_t>(zi)];
    for (int cy = 0; cy < zc; ++cy)
      for (int cx = 0; cx < zc; ++cx) {
        if (zn.truth[static_cast<size_t>(cy) * zc + cx] < sc.detect_threshold) continue;
        ++total_hot;
        auto loc = zn.belief.cell_center({cx, cy});
        for (size_t j = 0; j < tasks.locations.size(); ++j)
          if (tasks.completed[j] && (tasks.locations[j] - loc).norm() < 1e-6) {
            ++sampled_hot;
            break;
          }
      }
  }
  double unsampled_pct =
      total_hot == 0 ? 0.0 : 100.0 * (total_hot - sampled_hot) / total_hot;
  bundle.metrics = json{{"scenario", "seek_sample"},
                        {"total_sites", total_hot},
                        {"sampled_sites", sampled_hot},
                        {"unsampled_percent", unsampled_pct}};
  return bundle;
}

// ----------------------------------------------------------------- CTF ----

trace::TraceBundle run_ctf(const config::RunConfig& cfg, std::uint64_t seed) {
  scenarios::CtfConfig cc = scenarios::default_ctf_config();
  cc.tag_radius = cfg.num("ctf.tag_radius");
  cc.grab_radius = cfg.num("ctf.grab_radius");
  cc.game_duration = cfg.num("ctf.game_duration");
  cc.lead_base = cfg.num("ctf.lead_base");
  cc.w_dist = cfg.num("ctf.w_dist");
  cc.w_heading = cfg.num("ctf.w_heading");
  cc.field_x0 = cfg.num("ctf.field_x0");
  cc.field_y0 = cfg.num("ctf.field_y0");
  cc.field_x1 = cfg.num("ctf.field_x1");
  cc.field_y1 = cfg.num("ctf.field_y1");

  auto score = scenarios::play_ctf_game(cc, seed, cfg.flag("ctf.use_opinions"));
  trace::TraceBundle bundle;
  bundle.metrics = json{{"scenario", "ctf"},
                        {"grabs", score.grabs},
                        {"captures", score.captures},
                        {"score", score.grabs + score.captures}};
  return bundle;
}

}  // namespace

trace::TraceBundle run_mission(const config::RunConfig& cfg, std::optional<std::uint64_t> seed) {
  std::uint64_t s = seed.value_or(cfg.seed);
  trace::TraceBundle bundle;
  if (cfg.scenario == "hvu") {
    bundle = run_hvu(cfg, s);
  } else if (cfg.scenario == "seek_sample") {
    bundle = run_seek(cfg, s);
  } else if (cfg.scenario == "ctf") {
    bundle = run_ctf(cfg, s);
  } else {
    throw std::invalid_argument("unknown scenario: " + cfg.scenario);
  }
  auto effective = config::effective_config(cfg);
  effective["seed"] = s;
  bundle.effective_config = effective;
  return bundle;
}

}  // namespace cbpa::mission
