#include "fg/calculus.hpp"

#include "fg/error.hpp"

#include <algorithm>
#include <cmath>

namespace fg {

DiffOperators::DiffOperators(WeightedSpace space, double eps_grad, Exec exec)
    : space_(std::move(space)), stencil_(space_.domain()), eps_grad_(eps_grad), exec_(exec) {
  if (!(eps_grad_ > 0.0)) throw DomainError("DiffOperators: eps_grad must be positive");
  Vec ref = Vec::Zero(space_.dim());
  ref[0] = 1.0;
  fallback_ = norm().metric_tensor(ref / norm().eval(ref));
  fallback_inv_ = fallback_.inverse();
}

CovectorField DiffOperators::differential(const ScalarField& f) const {
  CovectorField df(space_.dim(), space_.size());
  for (int a = 0; a < space_.dim(); ++a) stencil_.apply(a, f.data(), df.comp[a].data(), exec_);
  return df;
}

ScalarField DiffOperators::divergence(const VectorField& v) const {
  const auto& m = space_.cell_mass();
  const std::size_t n = space_.size();
  ScalarField div(n, 0.0);
  std::vector<double> weighted(n), tmp(n);
  for (int a = 0; a < space_.dim(); ++a) {
    const auto& va = v.comp[a];
    for_each_node(exec_, n, [&](std::size_t i) { weighted[i] = m[i] * va[i]; });
    stencil_.apply_transpose(a, weighted.data(), tmp.data(), exec_);
    for_each_node(exec_, n, [&](std::size_t i) { div[i] += tmp[i]; });
  }
  for_each_node(exec_, n, [&](std::size_t i) { div[i] = -div[i] / m[i]; });
  return div;
}

VectorField DiffOperators::legendre_field(const CovectorField& df) const {
  VectorField grad(space_.dim(), space_.size());
  const auto& F = norm();
  for_each_node(exec_, space_.size(), [&](std::size_t i) {
    const Vec a = df.at(i);
    if (F.eval_dual(a) < eps_grad_) return;
    grad.set(i, F.legendre(a));
  });
  return grad;
}

VectorField DiffOperators::gradient(const ScalarField& f) const { return legendre_field(differential(f)); }

ScalarField DiffOperators::laplacian(const ScalarField& f) const { return divergence(gradient(f)); }

Linearization DiffOperators::linearize(const VectorField& grad) const {
  Linearization lin;
  lin.dim = space_.dim();
  lin.ginv.resize(space_.size());
  lin.fallback.assign(space_.size(), 0);
  const auto& F = norm();
  for_each_node(exec_, space_.size(), [&](std::size_t i) {
    const Vec v = grad.at(i);
    Mat ginv;
    if (F.eval(v) < eps_grad_) {
      ginv = fallback_inv_;
      lin.fallback[i] = 1;
    } else {
      ginv = F.metric_tensor(v).inverse();
    }
    auto& slot = lin.ginv[i];
    slot = {0.0, 0.0, 0.0, 0.0};
    for (int r = 0; r < lin.dim; ++r) {
      for (int c = 0; c < lin.dim; ++c) slot[r * lin.dim + c] = ginv(r, c);
    }
  });
  return lin;
}

VectorField DiffOperators::linearized_gradient(const ScalarField& f, const ScalarField& u) const {
  const Linearization lin = linearize(gradient(f));
  const CovectorField du = differential(u);
  VectorField out(space_.dim(), space_.size());
  for_each_node(exec_, space_.size(), [&](std::size_t i) { out.set(i, lin.apply(i, du.at(i))); });
  return out;
}

ScalarField DiffOperators::linearized_laplacian(const Linearization& lin, const ScalarField& u) const {
  const CovectorField du = differential(u);
  VectorField v(space_.dim(), space_.size());
  for_each_node(exec_, space_.size(), [&](std::size_t i) { v.set(i, lin.apply(i, du.at(i))); });
  return divergence(v);
}

ScalarField DiffOperators::linearized_laplacian(const ScalarField& f, const ScalarField& u) const {
  return linearized_laplacian(linearize(gradient(f)), u);
}

ScalarField DiffOperators::pairing(const CovectorField& a, const VectorField& v) const {
  ScalarField out(space_.size(), 0.0);
  for_each_node(exec_, space_.size(), [&](std::size_t i) {
    double s = 0.0;
    for (int k = 0; k < space_.dim(); ++k) s += a.comp[k][i] * v.comp[k][i];
    out[i] = s;
  });
  return out;
}

ScalarField DiffOperators::sq_norm_gradient(const ScalarField& f) const {
  const CovectorField df = differential(f);
  ScalarField out(space_.size());
  const auto& F = norm();
  for_each_node(exec_, space_.size(), [&](std::size_t i) {
    const double s = F.eval_dual(df.at(i));
    out[i] = s * s;
  });
  return out;
}

ScalarField DiffOperators::derivative_along_gradient(const ScalarField& g, const ScalarField& f) const {
  return pairing(differential(g), gradient(f));
}

ScalarField DiffOperators::gamma2(const ScalarField& f) const {
  const CovectorField df = differential(f);
  const VectorField grad = legendre_field(df);
  const Linearization lin = linearize(grad);
  const std::size_t n = space_.size();
  ScalarField half_sq(n);
  const auto& F = norm();
  for_each_node(exec_, n, [&](std::size_t i) {
    const double s = F.eval_dual(df.at(i));
    half_sq[i] = 0.5 * s * s;
  });
  const ScalarField lap = divergence(grad);
  const ScalarField first = linearized_laplacian(lin, half_sq);
  const ScalarField second = pairing(differential(lap), grad);
  ScalarField out(n);
  for_each_node(exec_, n, [&](std::size_t i) { out[i] = first[i] - second[i]; });
  return out;
}

double DiffOperators::energy(const ScalarField& f) const { return 0.5 * integrate(space_, sq_norm_gradient(f)); }

std::vector<char> DiffOperators::interior_mask(int margin) const {
  std::vector<char> mask(space_.size(), 1);
  if (space_.domain().periodic()) return mask;
  const auto& d = space_.domain();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const auto mi = space_.multi_index(i);
    for (int a = 0; a < space_.dim(); ++a) {
      if (mi[a] < margin || mi[a] > d.nodes[a] - 1 - margin) mask[i] = 0;
    }
  }
  return mask;
}

std::vector<char> DiffOperators::regular_mask(const ScalarField& f, int margin, int radius) const {
  std::vector<char> mask = interior_mask(margin);
  if (norm().is_euclidean()) return mask;
  const CovectorField df = differential(f);
  const std::size_t n = space_.size();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = norm().eval_dual(df.at(i));
  const double smax = *std::max_element(s.begin(), s.end());
  if (!(smax > 0.0)) return mask;

  const auto& d = space_.domain();
  const bool periodic = d.periodic();
  const int dim = space_.dim();
  auto neighbour = [&](std::array<int, 2> mi, int dx, int dy, std::size_t& out) {
    int c[2] = {mi[0] + dx, mi[1] + dy};
    for (int a = 0; a < dim; ++a) {
      if (periodic) {
        c[a] = (c[a] % d.nodes[a] + d.nodes[a]) % d.nodes[a];
      } else if (c[a] < 0 || c[a] >= d.nodes[a]) {
        return false;
      }
    }
    out = space_.index(c[0], dim == 2 ? c[1] : 0);
    return true;
  };
  const int ymax = dim == 2 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] >= 0.1 * smax) continue;
    const auto mi = space_.multi_index(i);
    bool local_min = true;
    std::size_t j = 0;
    for (int dy = -ymax; dy <= ymax && local_min; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (neighbour(mi, dx, dy, j) && s[j] < s[i]) {
          local_min = false;
          break;
        }
      }
    }
    if (!local_min) continue;
    const int ry = dim == 2 ? radius : 0;
    for (int dy = -ry; dy <= ry; ++dy) {
      for (int dx = -radius; dx <= radius; ++dx) {
        if (neighbour(mi, dx, dy, j)) mask[j] = 0;
      }
    }
  }
  return mask;
}

double adjointness_residual(const DiffOperators& ops, const ScalarField& phi, const VectorField& v) {
  const ScalarField div = ops.divergence(v);
  const CovectorField dphi = ops.differential(phi);
  const ScalarField pair = ops.pairing(dphi, v);
  ScalarField prod(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) prod[i] = phi[i] * div[i];
  return std::abs(integrate(ops.space(), prod) + integrate(ops.space(), pair));
}

}  // namespace fg
