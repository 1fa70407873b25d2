#pragma once

#include "fg/space.hpp"

#include <Eigen/SparseCore>

#include <cstddef>
#include <exception>
#include <vector>

namespace fg {

enum class Exec { Serial, Parallel };

// Run fn(i) for i in [0, n). Parallel uses a static OpenMP schedule; fn must
// only write to slot i so both policies give bit-identical results. The first
// exception thrown by any iteration is rethrown after the loop.
template <class Fn>
void for_each_node(Exec exec, std::size_t n, Fn&& fn) {
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (exec == Exec::Parallel) {
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(fg_for_each_node)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  }
}

// First-derivative stencil along one axis: central differences in the
// interior, second-order one-sided rows at no-flux ends, wrap-around on
// periodic axes. Rows and their transpose are both stored so the adjoint can
// be applied as a gather.
struct Stencil1D {
  struct Entry {
    int col;
    double coef;
  };
  std::vector<std::vector<Entry>> rows;
  std::vector<std::vector<Entry>> cols;  // transpose

  Stencil1D() = default;
  Stencil1D(int n, double h, bool periodic);
};

class Stencil {
 public:
  explicit Stencil(const Domain& domain);

  int dim() const { return dim_; }
  std::size_t size() const { return size_; }

  // out = D_axis f
  void apply(int axis, const double* f, double* out, Exec exec) const;
  // out = D_axis^T w
  void apply_transpose(int axis, const double* w, double* out, Exec exec) const;

  Eigen::SparseMatrix<double> sparse(int axis) const;

 private:
  int dim_;
  std::array<int, 2> n_;
  std::size_t size_;
  std::array<Stencil1D, 2> axes_;
};

// Straightforward sparse-matrix versions of the differential and the
// measure divergence, kept as the serial reference for the gather kernels.
namespace reference {
CovectorField differential(const WeightedSpace& space, const ScalarField& f);
ScalarField divergence(const WeightedSpace& space, const VectorField& v);
}  // namespace reference

}  // namespace fg
