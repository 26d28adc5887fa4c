#include "cbpa/scenarios/voronoi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbpa::scenarios {

bool Polygon::contains(const Eigen::Vector2d& p) const {
  bool inside = false;
  const size_t n = vertices.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = vertices[i];
    const auto& b = vertices[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      double x_cross = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

double Polygon::area() const {
  double twice = 0.0;
  const size_t n = vertices.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++)
    twice += vertices[j].x() * vertices[i].y() - vertices[i].x() * vertices[j].y();
  return std::fabs(twice) / 2.0;
}

void Polygon::bounds(Eigen::Vector2d& lo, Eigen::Vector2d& hi) const {
  lo.setConstant(std::numeric_limits<double>::infinity());
  hi.setConstant(-std::numeric_limits<double>::infinity());
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
}

Polygon Polygon::rectangle(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

VoronoiPartition voronoi_partition(const std::vector<Eigen::Vector2d>& agents,
                                   const Polygon& region, double resolution) {
  if (agents.empty()) throw std::invalid_argument("voronoi_partition needs at least one agent");
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (region.vertices.size() < 3 || region.area() <= 0.0)
    throw std::invalid_argument("region polygon is degenerate");

  Eigen::Vector2d lo, hi;
  region.bounds(lo, hi);

  VoronoiPartition part;
  part.cells.resize(agents.size());
  // Lattice of cell centers, offset half a step so cells tile the bounds.
  for (double y = lo.y() + resolution / 2.0; y < hi.y(); y += resolution) {
    for (double x = lo.x() + resolution / 2.0; x < hi.x(); x += resolution) {
      Eigen::Vector2d c(x, y);
      if (!region.contains(c)) continue;
      int best = 0;
      double best_d2 = (c - agents[0]).squaredNorm();
      for (size_t i = 1; i < agents.size(); ++i) {
        double d2 = (c - agents[i]).squaredNorm();
        if (d2 < best_d2) {  // strict: ties stay with the lower index
          best_d2 = d2;
          best = static_cast<int>(i);
        }
      }
      part.cells[static_cast<size_t>(best)].push_back(c);
    }
  }

  part.centroids.resize(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) {
    if (part.cells[i].empty()) {
      part.centroids[i] = agents[i];
      continue;
    }
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    for (const auto& c : part.cells[i]) sum += c;
    part.centroids[i] = sum / static_cast<double>(part.cells[i].size());
  }
  return part;
}

}  // namespace cbpa::scenarios
