#pragma once

#include "fg/space.hpp"
#include "fg/stencil.hpp"

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

namespace fg {

inline constexpr double kInfiniteN = std::numeric_limits<double>::infinity();

// Throws DomainError unless N lies in (-inf, 0) or [n, +inf].
void validate_N(double N, int n);

struct CurvatureQuery {
  double N = kInfiniteN;
  int directions = 64;  // angular samples per node in 2D; 1D always uses the two unit vectors
};

struct CurvatureReport {
  double K_eff = 0.0;
  std::size_t argmin_node = 0;
  Vec argmin_direction;
  double N = kInfiniteN;
  std::size_t nodes = 0;
  int directions = 0;
};

// Derivatives of the weight sampled once. On flat spaces the weighted Ricci
// curvature reduces to Hess Psi(v,v) - (DPsi(v))^2/(N-n), since geodesics are
// straight lines and the volume of the constant reference metric differs
// from Lebesgue measure by a constant.
class RicciField {
 public:
  explicit RicciField(const WeightedSpace& space, Exec exec = Exec::Parallel);

  double operator()(std::size_t node, const Vec& v, double N) const;
  const VectorField& dpsi() const { return dpsi_; }

  // F-unit directions sampled at every node.
  std::vector<Vec> unit_directions(int samples) const;

  CurvatureReport effective_K(const CurvatureQuery& query) const;

 private:
  WeightedSpace space_;
  Exec exec_;
  VectorField dpsi_;
  std::vector<std::array<double, 4>> hess_;
};

double ricci_N(const WeightedSpace& space, std::size_t node, const Vec& v, double N);
CurvatureReport effective_K(const WeightedSpace& space, const CurvatureQuery& query);

}  // namespace fg
