#pragma once

#include "fg/calculus.hpp"

#include <cstddef>
#include <string>

namespace fg {

// Pointwise identities are compared on nodes returned by regular_mask:
// boundary stencils are one order lower and non-quadratic norms are
// non-smooth at gradient zeros. Margin and exclusion radius are at least the
// node counts below and at least a fixed fraction of the axis, so that the
// compared region is the same physical set at every resolution and the
// observed order is not polluted by a moving boundary.
inline constexpr int kIdentityMargin = 8;
inline constexpr int kIdentityRadius = 5;
inline constexpr double kIdentityFraction = 1.0 / 16.0;

std::vector<char> identity_mask(const DiffOperators& ops, const ScalarField& h, double fraction = kIdentityFraction);

struct IdentityResidual {
  std::string name;
  double residual = 0.0;        // max |lhs - rhs| / max |rhs| over used nodes (or relative gap)
  std::size_t nodes_used = 0;
  std::size_t nodes_excluded = 0;
};

// grad(e^{ah}) = a e^{ah} grad h  and  Lap(e^{ah}) = a e^{ah}{Lap h + a F^2(grad h)}, a > 0.
// Returns the larger of the two relative residuals.
IdentityResidual identity_exp_chain(const DiffOperators& ops, const ScalarField& h, double a);

// Gamma_2(e^{ah}) = a^2 e^{2ah}{Gamma_2(h) + a D[F^2(grad h)](grad h) + a^2 F^4(grad h)}.
IdentityResidual identity_gamma2_exp(const DiffOperators& ops, const ScalarField& h, double a);

// int e^{2ah}(Lap h)^2 dm = int e^{2ah}{Gamma_2(h) + 3a D[F^2(grad h)](grad h) + 4a^2 F^4(grad h)} dm.
// Periodic domains only. Returns |lhs - rhs| / max(|lhs|, |rhs|).
IdentityResidual identity_weighted_lap_sq(const DiffOperators& ops, const ScalarField& h, double a);

// Observed order log2(coarse / fine) for a halving of the grid spacing.
double convergence_order(double coarse, double fine);

}  // namespace fg
