#pragma once

#include "fg/expr.hpp"
#include "fg/norm.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace fg {

enum class Geometry { Interval, Circle, Box, Torus };

// Uniform tensor grid on a flat domain of dimension 1 or 2.
//
// Interval(L) and Box(L1,L2) are centred at the origin, carry nodes on both
// end points, and use no-flux ends. Circle(L) and Torus(L1,L2) are periodic
// with nodes at i*h, h = L/n.
struct Domain {
  Geometry geometry = Geometry::Interval;
  std::array<double, 2> length{1.0, 1.0};
  std::array<int, 2> nodes{8, 1};

  static Domain interval(double L, int n) { return {Geometry::Interval, {L, 1.0}, {n, 1}}; }
  static Domain circle(double L, int n) { return {Geometry::Circle, {L, 1.0}, {n, 1}}; }
  static Domain box(double L1, double L2, int n1, int n2) { return {Geometry::Box, {L1, L2}, {n1, n2}}; }
  static Domain torus(double L1, double L2, int n1, int n2) { return {Geometry::Torus, {L1, L2}, {n1, n2}}; }

  int dim() const { return (geometry == Geometry::Interval || geometry == Geometry::Circle) ? 1 : 2; }
  bool periodic() const { return geometry == Geometry::Circle || geometry == Geometry::Torus; }
  std::size_t size() const { return static_cast<std::size_t>(nodes[0]) * (dim() == 2 ? nodes[1] : 1); }
  double spacing(int axis) const;
  double origin(int axis) const { return periodic() ? 0.0 : -0.5 * length[axis]; }

  // Throws DomainError when resolution < 8 per axis or a length is not positive.
  void validate() const;
  std::string describe() const;
};

using ScalarField = std::vector<double>;

// One Vector (or Covector) per node, stored component-major.
struct VectorField {
  int dim = 1;
  std::array<std::vector<double>, kMaxDim> comp;

  VectorField() = default;
  VectorField(int d, std::size_t n) : dim(d) {
    for (int k = 0; k < d; ++k) comp[k].assign(n, 0.0);
  }
  std::size_t size() const { return comp[0].size(); }
  Vec at(std::size_t i) const {
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = comp[k][i];
    return v;
  }
  void set(std::size_t i, const Vec& v) {
    for (int k = 0; k < dim; ++k) comp[k][i] = v[k];
  }
};

using CovectorField = VectorField;

// Discretized flat weighted Minkowski space (domain, constant norm, weight Psi)
// with the normalized reference measure m = e^{-Psi} vol, m(M) = 1.
class WeightedSpace {
 public:
  WeightedSpace(Domain domain, MinkowskiNorm norm, ScalarField psi);

  const Domain& domain() const { return domain_; }
  const MinkowskiNorm& norm() const { return norm_; }
  const ScalarField& psi() const { return psi_; }
  const std::vector<double>& cell_mass() const { return mass_; }
  std::size_t size() const { return mass_.size(); }
  int dim() const { return domain_.dim(); }

  std::size_t index(int ix, int iy = 0) const { return static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * domain_.nodes[0]; }
  std::array<int, 2> multi_index(std::size_t i) const {
    return {static_cast<int>(i % domain_.nodes[0]), static_cast<int>(i / domain_.nodes[0])};
  }
  double coord(std::size_t i, int axis) const;
  Vec position(std::size_t i) const;

  // Sample a closed-form expression at every node.
  ScalarField sample(const Expression& e) const;
  ScalarField sample(const std::string& expr) const { return sample(Expression(expr)); }

  // Same grid and weight, different norm (used for reverse(F)).
  WeightedSpace with_norm(const MinkowskiNorm& norm) const { return {domain_, norm, psi_}; }

 private:
  Domain domain_;
  MinkowskiNorm norm_;
  ScalarField psi_;
  std::vector<double> mass_;
};

WeightedSpace build_space(const Domain& domain, const MinkowskiNorm& norm, const std::string& psi_expr);

// Sum of f(x) * cell_mass(x).
double integrate(const WeightedSpace& space, const ScalarField& f);

// d(x, y) = F(y - x); periodic axes minimize over lattice translates.
double asym_distance(const WeightedSpace& space, std::size_t x, std::size_t y);

// Nonnegative masses per node summing to one.
class ProbabilityVector {
 public:
  // Normalizes weights; throws DomainError on negative, non-finite or zero total.
  explicit ProbabilityVector(std::vector<double> weights);
  static ProbabilityVector reference(const WeightedSpace& space) { return ProbabilityVector(space.cell_mass()); }

  const std::vector<double>& mass() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

}  // namespace fg
