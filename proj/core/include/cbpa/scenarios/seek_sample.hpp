// Adaptive seek-and-sample scenario: a shared grid belief over a scalar
// field, marginal-value inputs for the search and sample options, and the
// migration trigger between operating zones.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cbpa/rng.hpp"

namespace cbpa::scenarios {

struct CellIndex {
  int cx = 0;
  int cy = 0;
  bool operator==(const CellIndex&) const = default;
};

struct CellObservation {
  CellIndex cell;
  double phi = 0.5;       // measured field value in [0, 1]
  double variance = 0.01; // sensor variance
  // True when the cell is merely known to be occupied by a neighbor that
  // reported no detection; recorded as (0.5, 0.01).
  bool occupancy_only = false;
};

// Per-cell mean/variance belief that relaxes toward the uninformed prior
// (0.5, 0.25^2) between observations.
class GridBelief {
public:
  GridBelief(int nx, int ny, double cell_size, double origin_x = 0.0, double origin_y = 0.0,
             double decay_rate = 1.0 / 120.0);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_size() const { return cell_size_; }

  double mean(CellIndex c) const { return mean_[flat(c)]; }
  double variance(CellIndex c) const { return var_[flat(c)]; }
  Eigen::Vector2d cell_center(CellIndex c) const;
  CellIndex cell_at(const Eigen::Vector2d& pos) const;
  bool in_bounds(CellIndex c) const;

  static constexpr double prior_mean = 0.5;
  static constexpr double prior_variance = 0.0625;  // 0.25^2

  // Relax every cell toward the prior, then overwrite observed cells.
  void update(const std::vector<CellObservation>& observations, double dt);

private:
  size_t flat(CellIndex c) const;

  int nx_, ny_;
  double cell_size_, origin_x_, origin_y_, decay_rate_;
  std::vector<double> mean_, var_;
};

struct SeekSampleConfig {
  int search_depth = 3;       // grid transitions considered per agent
  double beta = 1.0;          // exploration weight on sqrt(variance)
  double gamma_t = 0.9;       // per-transition discount
  double b_mig = 2.0;         // migration input when a signal is detected
  double detect_threshold = 1.0;  // belief mean that spawns a sample task
};

// Upper-confidence value of the best belief cell reachable from pos within
// `depth` 4-neighbor transitions, restricted to `cells` and discounted per
// transition. Empty cell set yields 0.
double search_value(const GridBelief& belief, const Eigen::Vector2d& pos,
                    const std::vector<CellIndex>& cells, int depth, double beta,
                    double gamma_t = 0.9);

// Marginal value of agent `ego` searching: the fleet's best distinct-cell
// search allocation with the ego included minus the allocation without it.
// Nonnegative; zero when the ego's cells are already covered.
double search_input(const GridBelief& belief, const std::vector<Eigen::Vector2d>& searchers,
                    size_t ego, const std::vector<CellIndex>& cells,
                    const SeekSampleConfig& cfg);

struct SampleTaskSet {
  std::vector<Eigen::Vector2d> locations;
  std::vector<bool> claimed;
  std::vector<bool> completed;

  void add(const Eigen::Vector2d& loc);
  std::vector<Eigen::Vector2d> open() const;  // not yet completed
  void validate() const;
};

// Marginal cost reduction from agent `ego` sampling: the fleet travel cost
// of visiting all open tasks (iterated assignment approximation) without the
// ego minus the cost with it. Nonnegative; zero when there are no tasks.
double sample_input(const SampleTaskSet& tasks, const std::vector<Eigen::Vector2d>& samplers,
                    size_t ego);

// Total travel cost for the given fleet to visit every task, approximated by
// repeated optimal assignment rounds. Exposed for tests.
double fleet_visit_cost(const std::vector<Eigen::Vector2d>& fleet,
                        std::vector<Eigen::Vector2d> tasks);

double migrate_input(bool signal_detected, const SeekSampleConfig& cfg);

}  // namespace cbpa::scenarios
