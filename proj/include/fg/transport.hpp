#pragma once

#include "fg/space.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace fg {

struct TransportFlow {
  std::size_t from;
  std::size_t to;
  double mass;
};

struct TransportPlan {
  double cost = 0.0;
  std::vector<TransportFlow> flows;
  int pivots = 0;
};

// Exact optimal plan for a balanced transportation problem: northwest-corner
// start, then MODI pivots on the basis tree until every reduced cost is
// nonnegative. Dense cost, rows = sources. Intended for a few thousand pairs.
TransportPlan transportation_simplex(const Eigen::MatrixXd& cost, const std::vector<double>& supply,
                                     const std::vector<double>& demand);

// Monotone (quantile) coupling of two distributions on sorted points of the
// line, with cost c(y - x). Optimal whenever c is convex.
TransportPlan quantile_coupling(const std::vector<double>& x, const std::vector<double>& a, const std::vector<double>& y,
                                const std::vector<double>& b, const std::function<double(double)>& cost);

// W_2^2(source, target) for the cost d(x, y)^2 = F(y - x)^2. Intervals use the
// quantile coupling. Circles, boxes and tori use the simplex after merging
// nodes into at most max_cells blocks (block centres carry the merged mass).
double w2_squared(const WeightedSpace& space, const ProbabilityVector& source, const ProbabilityVector& target,
                  std::size_t max_cells = 64);

// Ent(mu | m) = sum mu log(mu / m).
double relative_entropy(const WeightedSpace& space, const ProbabilityVector& mu);

}  // namespace fg
