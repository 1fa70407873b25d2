#include "fg/stencil.hpp"

namespace fg {

Stencil1D::Stencil1D(int n, double h, bool periodic) : rows(n), cols(n) {
  const double c = 1.0 / (2.0 * h);
  for (int j = 0; j < n; ++j) {
    if (periodic) {
      rows[j] = {{(j + n - 1) % n, -c}, {(j + 1) % n, c}};
    } else if (j == 0) {
      rows[j] = {{0, -3.0 * c}, {1, 4.0 * c}, {2, -c}};
    } else if (j == n - 1) {
      rows[j] = {{n - 3, c}, {n - 2, -4.0 * c}, {n - 1, 3.0 * c}};
    } else {
      rows[j] = {{j - 1, -c}, {j + 1, c}};
    }
  }
  for (int j = 0; j < n; ++j) {
    for (const auto& e : rows[j]) cols[e.col].push_back({j, e.coef});
  }
}

Stencil::Stencil(const Domain& domain)
    : dim_(domain.dim()), n_(domain.nodes), size_(domain.size()) {
  for (int a = 0; a < dim_; ++a) axes_[a] = Stencil1D(n_[a], domain.spacing(a), domain.periodic());
  if (dim_ == 1) n_[1] = 1;
}

void Stencil::apply(int axis, const double* f, double* out, Exec exec) const {
  const auto& rows = axes_[axis].rows;
  const int nx = n_[0];
  for_each_node(exec, size_, [&](std::size_t i) {
    const int ix = static_cast<int>(i % nx);
    const int iy = static_cast<int>(i / nx);
    double s = 0.0;
    if (axis == 0) {
      for (const auto& e : rows[ix]) s += e.coef * f[static_cast<std::size_t>(iy) * nx + e.col];
    } else {
      for (const auto& e : rows[iy]) s += e.coef * f[static_cast<std::size_t>(e.col) * nx + ix];
    }
    out[i] = s;
  });
}

void Stencil::apply_transpose(int axis, const double* w, double* out, Exec exec) const {
  const auto& cols = axes_[axis].cols;
  const int nx = n_[0];
  for_each_node(exec, size_, [&](std::size_t i) {
    const int ix = static_cast<int>(i % nx);
    const int iy = static_cast<int>(i / nx);
    double s = 0.0;
    if (axis == 0) {
      for (const auto& e : cols[ix]) s += e.coef * w[static_cast<std::size_t>(iy) * nx + e.col];
    } else {
      for (const auto& e : cols[iy]) s += e.coef * w[static_cast<std::size_t>(e.col) * nx + ix];
    }
    out[i] = s;
  });
}

Eigen::SparseMatrix<double> Stencil::sparse(int axis) const {
  std::vector<Eigen::Triplet<double>> t;
  const int nx = n_[0];
  for (std::size_t i = 0; i < size_; ++i) {
    const int ix = static_cast<int>(i % nx);
    const int iy = static_cast<int>(i / nx);
    if (axis == 0) {
      for (const auto& e : axes_[0].rows[ix]) t.emplace_back(i, static_cast<std::size_t>(iy) * nx + e.col, e.coef);
    } else {
      for (const auto& e : axes_[1].rows[iy]) t.emplace_back(i, static_cast<std::size_t>(e.col) * nx + ix, e.coef);
    }
  }
  Eigen::SparseMatrix<double> D(size_, size_);
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

namespace reference {

CovectorField differential(const WeightedSpace& space, const ScalarField& f) {
  const Stencil st(space.domain());
  const Eigen::Map<const Eigen::VectorXd> fv(f.data(), f.size());
  CovectorField out(space.dim(), space.size());
  for (int a = 0; a < space.dim(); ++a) {
    const Eigen::VectorXd d = st.sparse(a) * fv;
    out.comp[a].assign(d.data(), d.data() + d.size());
  }
  return out;
}

ScalarField divergence(const WeightedSpace& space, const VectorField& v) {
  const Stencil st(space.domain());
  const Eigen::Map<const Eigen::VectorXd> m(space.cell_mass().data(), space.size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(space.size());
  for (int a = 0; a < space.dim(); ++a) {
    const Eigen::Map<const Eigen::VectorXd> va(v.comp[a].data(), v.size());
    acc += st.sparse(a).transpose() * m.cwiseProduct(va);
  }
  const Eigen::VectorXd div = -acc.cwiseQuotient(m);
  return ScalarField(div.data(), div.data() + div.size());
}

}  // namespace reference

}  // namespace fg
