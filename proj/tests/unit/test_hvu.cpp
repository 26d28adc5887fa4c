#include <cmath>
#include <set>

#include "cbpa/graph.hpp"
#include "cbpa/rng.hpp"
#include "cbpa/scenarios/hvu.hpp"
#include "doctest.h"

using namespace cbpa;
using namespace cbpa::scenarios;

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// Seven-defender intercept fixture: the intruder sits at the origin and the
// defenders are placed at the given ranges on distinct bearings, so the cost
// vector equals the range vector exactly.
std::vector<Eigen::Vector2d> ring_positions(const std::vector<double>& ranges) {
  std::vector<Eigen::Vector2d> out;
  for (size_t i = 0; i < ranges.size(); ++i) {
    double ang = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(ranges.size());
    out.push_back({ranges[i] * std::cos(ang), ranges[i] * std::sin(ang)});
  }
  return out;
}

std::set<int> settled_set(const std::vector<double>& ranges) {
  HvuConfig cfg;
  Eigen::VectorXd f(static_cast<Eigen::Index>(ranges.size()));
  auto pos = ring_positions(ranges);
  for (size_t i = 0; i < ranges.size(); ++i)
    f(static_cast<Eigen::Index>(i)) = intercept_input(intercept_cost(pos[i], {{0.0, 0.0}}), cfg);
  auto alloc =
      settle_intercept_allocation(f, graph::complete_graph(static_cast<int>(ranges.size())), cfg);
  std::set<int> out;
  for (size_t i = 0; i < alloc.intercepting.size(); ++i)
    if (alloc.intercepting[i]) out.insert(static_cast<int>(i));
  return out;
}

}  // namespace

TEST_CASE("intercept cost is the distance to the nearest target") {
  CHECK(intercept_cost({0, 0}, {{3, 4}}) == doctest::Approx(5.0));
  CHECK(intercept_cost({0, 0}, {{10, 0}, {0, 2}}) == doctest::Approx(2.0));
  CHECK(intercept_cost({0, 0}, {{3, 4}}, 2.0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(intercept_cost({0, 0}, {}), std::invalid_argument);
}

TEST_CASE("intercept input ramp with continuous knees") {
  HvuConfig cfg;  // knees at 25 and 100, peak 1
  CHECK(intercept_input(10.0, cfg) == doctest::Approx(1.0));
  CHECK(intercept_input(62.5, cfg) == doctest::Approx(0.5));
  CHECK(intercept_input(150.0, cfg) == doctest::Approx(0.0));
  // Continuity at both knees.
  CHECK(intercept_input(25.0 - 1e-9, cfg) ==
        doctest::Approx(intercept_input(25.0 + 1e-9, cfg)).epsilon(1e-6));
  CHECK(intercept_input(100.0 - 1e-9, cfg) ==
        doctest::Approx(intercept_input(100.0 + 1e-9, cfg)).epsilon(1e-6));
}

TEST_CASE("allocation step with no intruders balances batteries only") {
  HvuConfig cfg;
  std::vector<Eigen::Vector2d> pos{{0, 50}, {50, 0}, {0, -50}};
  Eigen::VectorXd kappa(3);
  kappa << 0.1, 0.5, 0.9;
  auto in = hvu_allocation_step(pos, kappa, {}, cfg);
  CHECK(in.f_intercept.isZero(1e-15));
  // Less exhausted agents get the larger patrol input.
  CHECK(in.f_patrol(0) > in.f_patrol(1));
  CHECK(in.f_patrol(1) > in.f_patrol(2));
  CHECK((in.f_patrol + in.f_loiter).isZero(1e-12));
}

TEST_CASE("centralized oracle picks the k cheapest") {
  Eigen::VectorXd costs(5);
  costs << 5, 1, 4, 1, 2;
  CHECK(centralized_intercept_oracle(costs, 0).empty());
  CHECK(centralized_intercept_oracle(costs, 2) == std::vector<int>{1, 3});  // tie: lower index
  CHECK(centralized_intercept_oracle(costs, 3) == std::vector<int>{1, 3, 4});
}

TEST_CASE("seven-defender intercept competition matches the recorded events") {
  // Five recorded intrusion events: defender ranges in meters, and the set
  // that took the intercept in each. The settled set must also equal the
  // centralized pick for the emergent k.
  struct Row {
    std::vector<double> ranges;
    std::set<int> expect;
  };
  std::vector<Row> rows = {
      {{118.5, 81.9, 107.9, 91.6, 118.4, 54.7, 92.6}, {1, 5}},
      {{26.3, 78.2, 111.6, 112.1, 53.8, 24.3, 101.1}, {0, 4, 5}},
      {{72.3, 95.1, 89.6, 114.0, 43.0, 91.3, 23.3}, {4, 6}},
      {{131.3, 95.0, 84.9, 106.1, 106.8, 116.5, 80.7}, {1, 2, 6}},
      {{104.5, 51.0, 73.5, 84.8, 96.3, 73.8, 47.42}, {1, 6}},
  };
  for (const auto& row : rows) {
    auto got = settled_set(row.ranges);
    CHECK(got == row.expect);
    // Consistency with the centralized oracle at the emergent k.
    Eigen::VectorXd costs(7);
    for (int i = 0; i < 7; ++i) costs(i) = row.ranges[static_cast<size_t>(i)];
    auto oracle = centralized_intercept_oracle(costs, static_cast<int>(got.size()));
    CHECK(std::set<int>(oracle.begin(), oracle.end()) == got);
  }
}

TEST_CASE("symmetric geometry still commits at least one interceptor") {
  HvuConfig cfg;
  Eigen::VectorXd f = Eigen::VectorXd::Constant(5, 0.6);
  auto alloc = settle_intercept_allocation(f, graph::complete_graph(5), cfg);
  CHECK(alloc.count >= 1);
}

TEST_CASE("far-away fleet stays out of the competition") {
  HvuConfig cfg;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(4);  // all beyond j_max
  auto alloc = settle_intercept_allocation(f, graph::complete_graph(4), cfg);
  CHECK(alloc.count == 0);
}
