#include "fg/identities.hpp"

#include "fg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fg {

namespace {

struct MaskedMax {
  double diff = 0.0;
  double scale = 0.0;
  std::size_t used = 0;

  void add(double lhs, double rhs) {
    diff = std::max(diff, std::abs(lhs - rhs));
    scale = std::max(scale, std::max(std::abs(lhs), std::abs(rhs)));
    ++used;
  }
  double relative() const { return scale > 0.0 ? diff / scale : 0.0; }
};

ScalarField exp_scaled(const ScalarField& h, double a) {
  ScalarField u(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) u[i] = std::exp(a * h[i]);
  return u;
}

}  // namespace

std::vector<char> identity_mask(const DiffOperators& ops, const ScalarField& h, double fraction) {
  const auto& d = ops.space().domain();
  int nmax = d.nodes[0];
  if (d.dim() == 2) nmax = std::max(nmax, d.nodes[1]);
  const int scaled = static_cast<int>(std::lround(fraction * nmax));
  return ops.regular_mask(h, std::max(kIdentityMargin, scaled), std::max(kIdentityRadius, scaled));
}

IdentityResidual identity_exp_chain(const DiffOperators& ops, const ScalarField& h, double a) {
  if (!(a > 0.0)) throw DomainError("identity_exp_chain: a must be positive");
  const auto mask = identity_mask(ops, h);
  const ScalarField u = exp_scaled(h, a);
  const VectorField grad_u = ops.gradient(u);
  const VectorField grad_h = ops.gradient(h);
  const ScalarField lap_u = ops.laplacian(u);
  const ScalarField lap_h = ops.divergence(grad_h);
  const ScalarField f2 = ops.sq_norm_gradient(h);

  MaskedMax grad_err, lap_err;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!mask[i]) continue;
    for (int k = 0; k < grad_u.dim; ++k) grad_err.add(grad_u.comp[k][i], a * u[i] * grad_h.comp[k][i]);
    lap_err.add(lap_u[i], a * u[i] * (lap_h[i] + a * f2[i]));
  }
  IdentityResidual r{"exp_chain", std::max(grad_err.relative(), lap_err.relative()), lap_err.used,
                     u.size() - lap_err.used};
  return r;
}

IdentityResidual identity_gamma2_exp(const DiffOperators& ops, const ScalarField& h, double a) {
  if (!(a > 0.0)) throw DomainError("identity_gamma2_exp: a must be positive");
  const auto mask = identity_mask(ops, h);
  const ScalarField u = exp_scaled(h, a);
  const ScalarField g2u = ops.gamma2(u);
  const ScalarField g2h = ops.gamma2(h);
  const ScalarField f2 = ops.sq_norm_gradient(h);
  const ScalarField df2 = ops.derivative_along_gradient(f2, h);

  MaskedMax err;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!mask[i]) continue;
    const double rhs = a * a * u[i] * u[i] * (g2h[i] + a * df2[i] + a * a * f2[i] * f2[i]);
    err.add(g2u[i], rhs);
  }
  return {"gamma2_exp", err.relative(), err.used, u.size() - err.used};
}

IdentityResidual identity_weighted_lap_sq(const DiffOperators& ops, const ScalarField& h, double a) {
  if (!ops.space().domain().periodic()) {
    throw DomainError("identity_weighted_lap_sq: requires a periodic domain");
  }
  if (!(a >= 0.0)) throw DomainError("identity_weighted_lap_sq: a must be nonnegative");
  const ScalarField lap = ops.laplacian(h);
  const ScalarField g2 = ops.gamma2(h);
  const ScalarField f2 = ops.sq_norm_gradient(h);
  const ScalarField df2 = ops.derivative_along_gradient(f2, h);
  ScalarField lhs(h.size()), rhs(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double w = std::exp(2.0 * a * h[i]);
    lhs[i] = w * lap[i] * lap[i];
    rhs[i] = w * (g2[i] + 3.0 * a * df2[i] + 4.0 * a * a * f2[i] * f2[i]);
  }
  const double l = integrate(ops.space(), lhs);
  const double r = integrate(ops.space(), rhs);
  const double scale = std::max(std::abs(l), std::abs(r));
  return {"weighted_lap_sq", scale > 0.0 ? std::abs(l - r) / scale : 0.0, h.size(), 0};
}

double convergence_order(double coarse, double fine) {
  if (fine <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(coarse / fine);
}

}  // namespace fg
