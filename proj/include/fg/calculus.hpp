#pragma once

#include "fg/space.hpp"
#include "fg/stencil.hpp"

#include <array>
#include <vector>

namespace fg {

// Per-node inverse metric g^{-1}(grad f), the coefficient field of the
// linearized operators. Nodes whose gradient is below the regularization
// threshold carry the fallback metric.
struct Linearization {
  int dim = 1;
  std::vector<std::array<double, 4>> ginv;  // row-major, top-left dim x dim used
  std::vector<char> fallback;               // 1 where the fallback metric was used

  Vec apply(std::size_t i, const Vec& a) const {
    Vec v(dim);
    if (dim == 1) {
      v[0] = ginv[i][0] * a[0];
    } else {
      v[0] = ginv[i][0] * a[0] + ginv[i][1] * a[1];
      v[1] = ginv[i][2] * a[0] + ginv[i][3] * a[1];
    }
    return v;
  }
};

// Discrete operators on a weighted space. The divergence is the exact
// negative adjoint of the differential under the lumped measure, so
//   integrate(phi * div V) == -integrate(Dphi(V))
// holds to round-off for every grid phi and V, boundary nodes included.
class DiffOperators {
 public:
  explicit DiffOperators(WeightedSpace space, double eps_grad = 1e-10, Exec exec = Exec::Parallel);

  const WeightedSpace& space() const { return space_; }
  const MinkowskiNorm& norm() const { return space_.norm(); }
  const Stencil& stencil() const { return stencil_; }
  double eps_grad() const { return eps_grad_; }
  Exec exec() const { return exec_; }
  const MetricTensor& fallback_metric() const { return fallback_; }

  CovectorField differential(const ScalarField& f) const;
  ScalarField divergence(const VectorField& v) const;

  // grad f = L*(Df) nodewise, zero where F*(Df) < eps_grad.
  VectorField gradient(const ScalarField& f) const;
  VectorField legendre_field(const CovectorField& df) const;

  ScalarField laplacian(const ScalarField& f) const;

  Linearization linearize(const VectorField& grad) const;
  VectorField linearized_gradient(const ScalarField& f, const ScalarField& u) const;
  ScalarField linearized_laplacian(const ScalarField& f, const ScalarField& u) const;
  // div(g^{-1} Du) with a precomputed linearization.
  ScalarField linearized_laplacian(const Linearization& lin, const ScalarField& u) const;

  // Gamma_2(f) = Lap^{grad f}[F^2(grad f)/2] - D[Lap f](grad f).
  ScalarField gamma2(const ScalarField& f) const;

  // F^2(grad f) = F*(Df)^2 nodewise.
  ScalarField sq_norm_gradient(const ScalarField& f) const;
  // a(v) nodewise.
  ScalarField pairing(const CovectorField& a, const VectorField& v) const;
  // D[g](grad f) nodewise.
  ScalarField derivative_along_gradient(const ScalarField& g, const ScalarField& f) const;

  // (1/2) integral of F*(Df)^2.
  double energy(const ScalarField& f) const;

  // Nodes at least `margin` steps away from every no-flux end (all nodes on
  // periodic domains).
  std::vector<char> interior_mask(int margin) const;

  // Interior nodes that are also at Chebyshev distance > radius from every
  // critical node of f. A critical node is a local minimum of F*(Df) below a
  // tenth of its maximum; near such nodes a non-quadratic norm makes L*
  // non-smooth and pointwise compositions lose their order. Quadratic norms
  // skip the critical-node exclusion.
  std::vector<char> regular_mask(const ScalarField& f, int margin, int radius) const;

 private:
  WeightedSpace space_;
  Stencil stencil_;
  double eps_grad_;
  Exec exec_;
  MetricTensor fallback_;
  MetricTensor fallback_inv_;
};

// Largest |integrate(phi * div V) + integrate(Dphi(V))| over the given pair.
double adjointness_residual(const DiffOperators& ops, const ScalarField& phi, const VectorField& v);

}  // namespace fg
