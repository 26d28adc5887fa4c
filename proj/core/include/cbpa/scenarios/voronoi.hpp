// Grid-based Voronoi partition of a polygonal region among agents, used for
// patrol station-keeping (one Lloyd step: move toward your cell centroid).
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cbpa::scenarios {

struct Polygon {
  std::vector<Eigen::Vector2d> vertices;  // counter-clockwise, implicit closure

  bool contains(const Eigen::Vector2d& p) const;  // even-odd rule
  double area() const;                            // shoelace, absolute value
  void bounds(Eigen::Vector2d& lo, Eigen::Vector2d& hi) const;

  static Polygon rectangle(double x0, double y0, double x1, double y1);
};

struct VoronoiPartition {
  // Per agent: the grid-cell centers assigned to it.
  std::vector<std::vector<Eigen::Vector2d>> cells;
  // Mean of assigned centers; falls back to the agent position when an agent
  // owns no cells (all cells closer to someone else).
  std::vector<Eigen::Vector2d> centroids;
};

// Samples the region on a square lattice of the given resolution and assigns
// each in-region cell center to its nearest agent, ties to the lower index.
VoronoiPartition voronoi_partition(const std::vector<Eigen::Vector2d>& agents,
                                   const Polygon& region, double resolution);

}  // namespace cbpa::scenarios
