#include "cbpa/scenarios/seek_sample.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "cbpa/hungarian.hpp"

namespace cbpa::scenarios {

GridBelief::GridBelief(int nx, int ny, double cell_size, double origin_x, double origin_y,
                       double decay_rate)
    : nx_(nx), ny_(ny), cell_size_(cell_size), origin_x_(origin_x), origin_y_(origin_y),
      decay_rate_(decay_rate) {
  if (nx <= 0 || ny <= 0) throw std::invalid_argument("grid belief: empty grid");
  if (!(cell_size > 0.0)) throw std::invalid_argument("grid belief: cell size must be positive");
  if (decay_rate < 0.0) throw std::invalid_argument("grid belief: negative decay rate");
  mean_.assign(static_cast<size_t>(nx) * static_cast<size_t>(ny), prior_mean);
  var_.assign(mean_.size(), prior_variance);
}

size_t GridBelief::flat(CellIndex c) const {
  if (!in_bounds(c)) throw std::out_of_range("grid belief: cell out of bounds");
  return static_cast<size_t>(c.cy) * static_cast<size_t>(nx_) + static_cast<size_t>(c.cx);
}

bool GridBelief::in_bounds(CellIndex c) const {
  return c.cx >= 0 && c.cx < nx_ && c.cy >= 0 && c.cy < ny_;
}

Eigen::Vector2d GridBelief::cell_center(CellIndex c) const {
  return {origin_x_ + (c.cx + 0.5) * cell_size_, origin_y_ + (c.cy + 0.5) * cell_size_};
}

CellIndex GridBelief::cell_at(const Eigen::Vector2d& pos) const {
  return {static_cast<int>(std::floor((pos.x() - origin_x_) / cell_size_)),
          static_cast<int>(std::floor((pos.y() - origin_y_) / cell_size_))};
}

void GridBelief::update(const std::vector<CellObservation>& observations, double dt) {
  if (dt < 0.0) throw std::invalid_argument("grid belief: negative dt");
  const double fade = std::exp(-decay_rate_ * dt);
  for (size_t i = 0; i < mean_.size(); ++i) {
    mean_[i] = prior_mean + (mean_[i] - prior_mean) * fade;
    var_[i] = prior_variance + (var_[i] - prior_variance) * fade;
  }
  for (const auto& obs : observations) {
    size_t i = flat(obs.cell);
    if (obs.occupancy_only) {
      mean_[i] = 0.5;
      var_[i] = 0.01;
      continue;
    }
    if (obs.phi < 0.0 || obs.phi > 1.0)
      throw std::invalid_argument("grid belief: phi outside [0,1]");
    mean_[i] = obs.phi;
    var_[i] = std::clamp(obs.variance, 0.0, prior_variance);
  }
}

namespace {

// BFS distances (in transitions) from the cell nearest `pos`, restricted to
// the allowed cell set with 4-connectivity.
std::vector<std::pair<CellIndex, int>> reachable_cells(const GridBelief& belief,
                                                       const Eigen::Vector2d& pos,
                                                       const std::vector<CellIndex>& cells,
                                                       int depth) {
  if (cells.empty()) return {};
  auto allowed = [&](CellIndex c) {
    return std::find(cells.begin(), cells.end(), c) != cells.end();
  };
  // Start from the allowed cell closest to the agent.
  CellIndex start = cells.front();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cells) {
    double d = (belief.cell_center(c) - pos).norm();
    if (d < best) {
      best = d;
      start = c;
    }
  }
  std::vector<std::pair<CellIndex, int>> out;
  std::vector<CellIndex> seen = {start};
  std::deque<std::pair<CellIndex, int>> frontier = {{start, 0}};
  while (!frontier.empty()) {
    auto [c, d] = frontier.front();
    frontier.pop_front();
    if (d > 0) out.push_back({c, d});
    if (d == depth) continue;
    const CellIndex nbrs[4] = {{c.cx + 1, c.cy}, {c.cx - 1, c.cy}, {c.cx, c.cy + 1}, {c.cx, c.cy - 1}};
    for (const auto& nb : nbrs) {
      if (!belief.in_bounds(nb) || !allowed(nb)) continue;
      if (std::find(seen.begin(), seen.end(), nb) != seen.end()) continue;
      seen.push_back(nb);
      frontier.push_back({nb, d + 1});
    }
  }
  return out;
}

double ucb(const GridBelief& belief, CellIndex c, double beta) {
  return belief.mean(c) + beta * std::sqrt(belief.variance(c));
}

}  // namespace

double search_value(const GridBelief& belief, const Eigen::Vector2d& pos,
                    const std::vector<CellIndex>& cells, int depth, double beta,
                    double gamma_t) {
  if (depth < 1) throw std::invalid_argument("search_value: depth must be >= 1");
  double best = 0.0;
  for (const auto& [c, d] : reachable_cells(belief, pos, cells, depth))
    best = std::max(best, std::pow(gamma_t, d) * ucb(belief, c, beta));
  return best;
}

double search_input(const GridBelief& belief, const std::vector<Eigen::Vector2d>& searchers,
                    size_t ego, const std::vector<CellIndex>& cells,
                    const SeekSampleConfig& cfg) {
  if (ego >= searchers.size()) throw std::invalid_argument("search_input: ego out of range");

  // Candidate cells and discounted values per agent.
  std::vector<std::vector<std::pair<CellIndex, double>>> values(searchers.size());
  std::vector<CellIndex> pool;
  for (size_t a = 0; a < searchers.size(); ++a) {
    for (const auto& [c, d] : reachable_cells(belief, searchers[a], cells, cfg.search_depth)) {
      values[a].push_back({c, std::pow(cfg.gamma_t, d) * ucb(belief, c, cfg.beta)});
      if (std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
    }
  }

  // Best distinct-cell allocation value for a subset of agents.
  auto fleet_value = [&](bool with_ego) {
    std::vector<size_t> active;
    for (size_t a = 0; a < searchers.size(); ++a)
      if (with_ego || a != ego) active.push_back(a);
    if (active.empty() || pool.empty()) return 0.0;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(active.size()),
                                              static_cast<Eigen::Index>(pool.size()));
    for (size_t r = 0; r < active.size(); ++r)
      for (const auto& [c, v] : values[active[r]]) {
        auto it = std::find(pool.begin(), pool.end(), c);
        w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(it - pool.begin())) = v;
      }
    return assign::max_weight_assignment(w).total_cost;
  };

  return std::max(0.0, fleet_value(true) - fleet_value(false));
}

void SampleTaskSet::add(const Eigen::Vector2d& loc) {
  locations.push_back(loc);
  claimed.push_back(false);
  completed.push_back(false);
}

std::vector<Eigen::Vector2d> SampleTaskSet::open() const {
  std::vector<Eigen::Vector2d> out;
  for (size_t i = 0; i < locations.size(); ++i)
    if (!completed[i]) out.push_back(locations[i]);
  return out;
}

void SampleTaskSet::validate() const {
  if (claimed.size() != locations.size() || completed.size() != locations.size())
    throw std::logic_error("sample task set: flag arrays out of sync");
  for (size_t i = 0; i < locations.size(); ++i)
    if (completed[i] && !claimed[i])
      throw std::logic_error("sample task set: completed task was never claimed");
}

double fleet_visit_cost(const std::vector<Eigen::Vector2d>& fleet,
                        std::vector<Eigen::Vector2d> tasks) {
  if (fleet.empty()) throw std::invalid_argument("fleet_visit_cost: empty fleet");
  std::vector<Eigen::Vector2d> at = fleet;
  double total = 0.0;
  // Assignment rounds: every agent takes at most one task per round, agents
  // advance to their assigned task, repeat until no tasks remain.
  while (!tasks.empty()) {
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(at.size()),
                         static_cast<Eigen::Index>(tasks.size()));
    for (size_t i = 0; i < at.size(); ++i)
      for (size_t j = 0; j < tasks.size(); ++j)
        cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            (at[i] - tasks[j]).norm();
    auto a = assign::min_cost_assignment(cost);
    std::vector<bool> done(tasks.size(), false);
    for (size_t i = 0; i < at.size(); ++i) {
      int j = a.row_to_col[i];
      if (j < 0) continue;
      total += (at[i] - tasks[static_cast<size_t>(j)]).norm();
      at[i] = tasks[static_cast<size_t>(j)];
      done[static_cast<size_t>(j)] = true;
    }
    std::vector<Eigen::Vector2d> rest;
    for (size_t j = 0; j < tasks.size(); ++j)
      if (!done[j]) rest.push_back(tasks[j]);
    tasks = std::move(rest);
  }
  return total;
}

double sample_input(const SampleTaskSet& tasks, const std::vector<Eigen::Vector2d>& samplers,
                    size_t ego) {
  if (ego >= samplers.size()) throw std::invalid_argument("sample_input: ego out of range");
  tasks.validate();
  auto open = tasks.open();
  if (open.empty()) return 0.0;

  std::vector<Eigen::Vector2d> without;
  for (size_t i = 0; i < samplers.size(); ++i)
    if (i != ego) without.push_back(samplers[i]);

  double with_cost = fleet_visit_cost(samplers, open);
  // With no other sampler the tasks would go unserved; charge a flat
  // unserved penalty per task so a lone sampler always has an incentive.
  constexpr double unserved_penalty = 100.0;  // m-equivalent per open task
  double without_cost = without.empty()
                            ? with_cost + unserved_penalty * static_cast<double>(open.size())
                            : fleet_visit_cost(without, open);
  return std::max(0.0, without_cost - with_cost);
}

double migrate_input(bool signal_detected, const SeekSampleConfig& cfg) {
  return signal_detected ? cfg.b_mig : 0.0;
}

}  // namespace cbpa::scenarios
