#include "cbpa/ivp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbpa/nod.hpp"

namespace cbpa::ivp {

DecisionDomain::DecisionDomain(std::vector<DecisionVariable> vars, std::uint64_t grid_cap)
    : vars_(std::move(vars)) {
  if (vars_.empty()) throw std::invalid_argument("decision domain needs at least one variable");
  sizes_.reserve(vars_.size());
  for (const auto& v : vars_) {
    if (!(v.step > 0.0)) throw std::invalid_argument("variable step must be positive: " + v.name);
    if (v.upper < v.lower)
      throw std::invalid_argument("variable has upper < lower: " + v.name);
    // Number of grid points; the upper bound is included when it lands on
    // the lattice (within a small tolerance for float steps like 0.1).
    int n = static_cast<int>(std::floor((v.upper - v.lower) / v.step + 1e-9)) + 1;
    sizes_.push_back(n);
    total_ *= static_cast<std::uint64_t>(n);
    if (total_ > grid_cap)
      throw std::invalid_argument("decision grid exceeds cap of " + std::to_string(grid_cap));
  }
}

double DecisionDomain::value(int m, int idx) const {
  const auto& v = vars_[static_cast<size_t>(m)];
  if (idx < 0 || idx >= sizes_[static_cast<size_t>(m)])
    throw std::out_of_range("grid index out of range for " + v.name);
  return v.lower + v.step * idx;
}

std::vector<double> DecisionDomain::point(std::uint64_t flat) const {
  if (flat >= total_) throw std::out_of_range("flat grid index out of range");
  std::vector<double> p(vars_.size());
  for (int m = static_cast<int>(vars_.size()) - 1; m >= 0; --m) {
    const auto n = static_cast<std::uint64_t>(sizes_[static_cast<size_t>(m)]);
    p[static_cast<size_t>(m)] = value(m, static_cast<int>(flat % n));
    flat /= n;
  }
  return p;
}

void OptionBehaviorMap::validate() const {
  for (Eigen::Index j = 0; j < a_c.rows(); ++j)
    for (Eigen::Index q = 0; q < a_c.cols(); ++q) {
      double v = a_c(j, q);
      if (v != 0.0 && v != 1.0)
        throw std::invalid_argument("option-behavior map entries must be 0 or 1");
    }
}

std::vector<int> OptionBehaviorMap::empty_option_rows() const {
  std::vector<int> rows;
  for (Eigen::Index j = 0; j < a_c.rows(); ++j)
    if (a_c.row(j).sum() == 0.0) rows.push_back(static_cast<int>(j));
  return rows;
}

std::vector<int> active_behaviors(const Eigen::VectorXd& z_i, const OptionBehaviorMap& map,
                                  const std::vector<Behavior>& behaviors) {
  map.validate();
  if (z_i.size() != map.a_c.rows())
    throw std::invalid_argument("opinion vector length must match option-behavior map rows");
  if (static_cast<Eigen::Index>(behaviors.size()) != map.a_c.cols())
    throw std::invalid_argument("behavior list length must match option-behavior map columns");
  int j = nod::strongest_option(z_i);
  std::vector<int> active;
  for (Eigen::Index q = 0; q < map.a_c.cols(); ++q)
    if (map.a_c(j, q) == 1.0) active.push_back(static_cast<int>(q));
  return active;
}

namespace {

std::vector<double> grid_argmax(const DecisionDomain& domain,
                                const std::vector<Behavior>& active) {
  if (active.empty()) throw std::invalid_argument("no active behaviors to optimize");
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t best_flat = 0;
  const std::uint64_t total = domain.grid_size();
  for (std::uint64_t flat = 0; flat < total; ++flat) {
    auto p = domain.point(flat);
    double score = 0.0;
    for (const auto& b : active) score += b.weight * b.objective(p);
    if (score > best) {  // strict: ties keep the lowest flat index
      best = score;
      best_flat = flat;
    }
  }
  return domain.point(best_flat);
}

}  // namespace

std::vector<double> solve(const DecisionDomain& domain, const std::vector<Behavior>& active) {
  // Incremental evaluation with odometer decoding, kept separate from the
  // oracle below so the two can disagree if one of them is wrong.
  if (active.empty()) throw std::invalid_argument("no active behaviors to optimize");
  const int nv = domain.n_variables();
  std::vector<int> idx(static_cast<size_t>(nv), 0);
  std::vector<double> p(static_cast<size_t>(nv));
  for (int m = 0; m < nv; ++m) p[static_cast<size_t>(m)] = domain.value(m, 0);

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_p = p;
  while (true) {
    double score = 0.0;
    for (const auto& b : active) score += b.weight * b.objective(p);
    if (score > best) {
      best = score;
      best_p = p;
    }
    // Advance the odometer, last variable fastest (matches flat-index order).
    int m = nv - 1;
    for (; m >= 0; --m) {
      if (++idx[static_cast<size_t>(m)] < domain.size(m)) {
        p[static_cast<size_t>(m)] = domain.value(m, idx[static_cast<size_t>(m)]);
        break;
      }
      idx[static_cast<size_t>(m)] = 0;
      p[static_cast<size_t>(m)] = domain.value(m, 0);
    }
    if (m < 0) break;
  }
  return best_p;
}

std::vector<double> brute_force_solve(const DecisionDomain& domain,
                                      const std::vector<Behavior>& active) {
  return grid_argmax(domain, active);
}

double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  return w;
}

double circular_distance_deg(double a, double b) {
  double d = std::fabs(wrap_degrees(a) - wrap_degrees(b));
  return d > 180.0 ? 360.0 - d : d;
}

}  // namespace cbpa::ivp
