#include <algorithm>
#include <cmath>
#include <numeric>

#include "cbpa/ivp.hpp"
#include "cbpa/rng.hpp"
#include "cbpa/scenarios/ctf.hpp"
#include "doctest.h"

using namespace cbpa;
using namespace cbpa::scenarios;

namespace {

// Three-vehicle team near its own flag on the left with staggered distances
// to the enemy flag, so the default attack direction has a unique peak at
// vehicle 0.
CtfGameState fixture_state() {
  CtfGameState gs;
  gs.own_flag = {10.0, 40.0};
  gs.enemy_flag = {150.0, 40.0};
  for (int i = 0; i < 3; ++i) {
    world::VehicleState v;
    v.x = 20.0 - 4.0 * i;  // vehicle 0 is closest to the enemy flag
    v.y = 40.0 + 10.0 * (i - 1);
    v.team = 0;
    gs.own.push_back(v);
  }
  for (int i = 0; i < 3; ++i) {
    world::VehicleState v;
    v.x = 140.0;
    v.y = 25.0 + 15.0 * i;
    v.team = 1;
    gs.enemy.push_back(v);
  }
  return gs;
}

CtfConfig constant_magnitude(double f_ave) {
  auto cfg = default_ctf_config();
  cfg.f_ave = [f_ave](const CtfGameState&) { return f_ave; };
  return cfg;
}

int attacker_count(const CtfAllocation& alloc) {
  return static_cast<int>(std::count(alloc.attacking.begin(), alloc.attacking.end(), true));
}

}  // namespace

TEST_CASE("ctf inputs turn fully negative and uniform when the own flag is taken") {
  auto gs = fixture_state();
  gs.own_flag_taken = true;
  auto inputs = ctf_inputs(gs, default_ctf_config());
  REQUIRE(inputs.size() == 3);
  for (const auto& [attack, defend] : inputs) {
    CHECK(attack == doctest::Approx(-2.0));
    CHECK(defend == doctest::Approx(2.0));
  }
}

TEST_CASE("ctf inputs split a positive magnitude along the direction rule") {
  auto gs = fixture_state();
  const double f_ave = 0.7;
  auto cfg = constant_magnitude(f_ave);
  cfg.f_net_direction = [](const CtfGameState&) {
    Eigen::Vector3d d(2.0, -1.0, -1.0);
    return Eigen::VectorXd(d / d.norm());
  };
  auto inputs = ctf_inputs(gs, cfg);

  // attack_i = f_ave + f_net_i with ||f_net|| = f_ave along the given unit
  // direction, and defend is the mirror option.
  const double s = f_ave / std::sqrt(6.0);
  CHECK(inputs[0].first == doctest::Approx(f_ave + 2.0 * s));
  CHECK(inputs[1].first == doctest::Approx(f_ave - s));
  CHECK(inputs[2].first == doctest::Approx(f_ave - s));
  for (const auto& [attack, defend] : inputs) CHECK(defend == doctest::Approx(-attack));

  // The deviations from the common term are zero-sum with norm |f_ave|.
  Eigen::Vector3d net(inputs[0].first - f_ave, inputs[1].first - f_ave, inputs[2].first - f_ave);
  CHECK(net.sum() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(net.norm() == doctest::Approx(f_ave));
}

TEST_CASE("ctf inputs favor the vehicle closest to the enemy flag by default") {
  auto gs = fixture_state();
  auto inputs = ctf_inputs(gs, constant_magnitude(0.3));
  CHECK(inputs[0].first > inputs[1].first);
  CHECK(inputs[0].first > inputs[2].first);
}

TEST_CASE("ctf inputs validation") {
  auto gs = fixture_state();
  auto cfg = default_ctf_config();

  SUBCASE("team must have exactly three vehicles") {
    gs.own.pop_back();
    CHECK_THROWS_AS(ctf_inputs(gs, cfg), std::invalid_argument);
  }
  SUBCASE("direction must return three components") {
    cfg.f_net_direction = [](const CtfGameState&) { return Eigen::VectorXd::Ones(2).eval(); };
    CHECK_THROWS_AS(ctf_inputs(gs, cfg), std::invalid_argument);
  }
  SUBCASE("direction must be zero-sum") {
    cfg.f_net_direction = [](const CtfGameState&) { return Eigen::VectorXd::Ones(3).eval(); };
    CHECK_THROWS_AS(ctf_inputs(gs, cfg), std::invalid_argument);
  }
  SUBCASE("direction must be nonzero") {
    cfg.f_net_direction = [](const CtfGameState&) { return Eigen::VectorXd::Zero(3).eval(); };
    CHECK_THROWS_AS(ctf_inputs(gs, cfg), std::invalid_argument);
  }
  SUBCASE("degenerate field bounds are rejected") {
    cfg.field_x1 = cfg.field_x0;
    CHECK_THROWS_AS(ctf_inputs(gs, cfg), std::invalid_argument);
  }
}

TEST_CASE("settled attacker count follows the input magnitude") {
  auto gs = fixture_state();

  SUBCASE("strong negative magnitude keeps everyone defending") {
    auto alloc = settle_ctf_allocation(gs, constant_magnitude(-0.5));
    CHECK(attacker_count(alloc) == 0);
    for (int i = 0; i < 3; ++i) CHECK(alloc.z(i) < 0.0);
  }
  SUBCASE("moderate magnitude sends the closest vehicle") {
    auto alloc = settle_ctf_allocation(gs, constant_magnitude(0.3));
    CHECK(attacker_count(alloc) == 1);
    CHECK(alloc.attacking[0]);
  }
  SUBCASE("large magnitude sends two") {
    auto alloc = settle_ctf_allocation(gs, constant_magnitude(1.6));
    CHECK(attacker_count(alloc) == 2);
  }
  SUBCASE("attacker count is monotone in the magnitude") {
    int prev = 0;
    for (double f : {-0.6, -0.3, 0.0, 0.3, 0.6, 0.9, 1.2, 1.6}) {
      int k = attacker_count(settle_ctf_allocation(gs, constant_magnitude(f)));
      CHECK(k >= prev);
      prev = k;
    }
  }
}

TEST_CASE("defender assignment matches a brute-force oracle on square cases") {
  rng::Stream rnd(41, "ctf-assign");
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<world::VehicleState> defs(3), ints(3);
    for (auto& v : defs) {
      v.x = rnd.uniform(0.0, 100.0);
      v.y = rnd.uniform(0.0, 100.0);
      v.heading = rnd.uniform(0.0, 360.0);
    }
    for (auto& v : ints) {
      v.x = rnd.uniform(0.0, 100.0);
      v.y = rnd.uniform(0.0, 100.0);
      v.heading = rnd.uniform(0.0, 360.0);
    }
    const double wd = 1.0, wh = 0.5;
    auto cost = [&](size_t i, size_t j) {
      return wd * (defs[i].position() - ints[j].position()).norm() +
             wh * ivp::circular_distance_deg(defs[i].heading, ints[j].heading);
    };
    std::vector<size_t> perm = {0, 1, 2};
    double best = std::numeric_limits<double>::infinity();
    do {
      double c = cost(0, perm[0]) + cost(1, perm[1]) + cost(2, perm[2]);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));

    auto tasks = defender_assignment(defs, ints, wd, wh);
    REQUIRE(tasks.size() == 3);
    double got = 0.0;
    std::vector<bool> used(3, false);
    for (size_t i = 0; i < 3; ++i) {
      CHECK(tasks[i].rank == 0);
      REQUIRE(tasks[i].intruder >= 0);
      CHECK_FALSE(used[static_cast<size_t>(tasks[i].intruder)]);
      used[static_cast<size_t>(tasks[i].intruder)] = true;
      got += cost(i, static_cast<size_t>(tasks[i].intruder));
    }
    CHECK(got == doctest::Approx(best));
  }
}

TEST_CASE("surplus defenders back up the nearest intruder with rising ranks") {
  std::vector<world::VehicleState> defs(3);
  defs[0].x = 0.0;
  defs[1].x = 5.0;
  defs[2].x = 30.0;
  std::vector<world::VehicleState> ints(1);
  ints[0].x = 10.0;

  auto tasks = defender_assignment(defs, ints, 1.0, 0.0);
  REQUIRE(tasks.size() == 3);
  for (const auto& t : tasks) CHECK(t.intruder == 0);
  // Defender 1 holds the optimal slot (rank 0); the two surplus defenders
  // take ranks in ascending cost order: defender 0 (10 m) before 2 (20 m).
  CHECK(tasks[1].rank == 0);
  CHECK(tasks[0].rank == 1);
  CHECK(tasks[2].rank == 2);

  CHECK(defender_assignment(defs, {}, 1.0, 0.0).empty());
  CHECK_THROWS_AS(defender_assignment({}, ints, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("intercept point leads the intruder along its heading") {
  world::VehicleState v;
  v.x = 10.0;
  v.y = 20.0;

  v.heading = 0.0;  // due north (+y)
  auto p0 = intercept_point(v, 0, 10.0);
  CHECK(p0.x() == doctest::Approx(10.0));
  CHECK(p0.y() == doctest::Approx(30.0));

  v.heading = 90.0;  // due east (+x); rank 1 doubles the lead
  auto p1 = intercept_point(v, 1, 10.0);
  CHECK(p1.x() == doctest::Approx(30.0));
  CHECK(p1.y() == doctest::Approx(20.0));

  CHECK_THROWS_AS(intercept_point(v, -1, 10.0), std::invalid_argument);
}

TEST_CASE("ctf games are deterministic in the seed") {
  auto cfg = default_ctf_config();
  cfg.game_duration = 180.0;
  auto a = play_ctf_game(cfg, 7, true);
  auto b = play_ctf_game(cfg, 7, true);
  CHECK(a.grabs == b.grabs);
  CHECK(a.captures == b.captures);
  auto c = play_ctf_game(cfg, 8, true);
  // A different seed only shifts starts slightly; scores stay bounded sane.
  CHECK(c.grabs >= 0);
  CHECK(c.grabs >= c.captures);
}
