#pragma once

#include "fg/calculus.hpp"
#include "fg/identities.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace fg {

struct FlowParams {
  double tau = 1e-3;
  double t_end = 1.0;
  double tol = 1e-10;      // L2(m) norm of v - u - tau Lap v at acceptance
  int max_iter = 50;       // Newton iterations per step
  int stride = 1;          // record every stride-th step
};

struct FlowState {
  double t = 0.0;
  ScalarField u;
  double mass = 0.0;
  double energy = 0.0;
  double variance = 0.0;
  double entropy = 0.0;  // of rho = u / mass; NaN when u is not positive
  double fisher = 0.0;   // integral of F^2(grad rho) / rho; NaN when u is not positive
  double min_u = 0.0;
  double max_u = 0.0;
};

struct FlowSeries {
  std::vector<FlowState> states;
  double tau = 0.0;
  // Extremes over every step, recorded or not.
  double min_u = 0.0;
  double max_u = 0.0;
  std::size_t steps = 0;
  std::size_t newton_iterations = 0;
};

FlowState observe(const DiffOperators& ops, double t, ScalarField u);

// One minimizing-movement step: argmin_v E(v) + |v - u|^2_{L2(m)} / (2 tau).
// Damped Newton with the Jacobian M + tau sum_kl D_k^T M g^{kl}(grad v) D_l;
// the objective is convex, so backtracking on it always makes progress.
// Throws SolverError when the residual tolerance is not met.
ScalarField step(const DiffOperators& ops, const ScalarField& u, double tau, double tol = 1e-10, int max_iter = 50,
                 int* iterations = nullptr);

FlowSeries evolve(const DiffOperators& ops, const ScalarField& u0, const FlowParams& params);

// Central time difference of F^2(grad u) against 2 D[Lap u](grad u) at every
// interior recorded state with t >= t_min, on nodes away from gradient zeros.
// The series must be recorded with stride 1.
//
// Under a non-quadratic norm a smooth initial datum is not compatible with
// the operator: Lap u jumps across gradient zeros, and the solution passes
// through an initial layer in which u_tt is large near them. Skipping that
// layer with t_min restores the expected order away from the zeros.
IdentityResidual check_dEdt_identity(const DiffOperators& ops, const FlowSeries& series, double t_min = 0.0);

struct DecayRates {
  double variance_rate = 0.0;
  double entropy_rate = 0.0;
};

// Negative least-squares slope of log(observable) over the tail half of the
// series, the series being cut where the observable first falls to
// kRateFloor times its initial value. A series whose tail has fewer than two
// positive values reports +inf.
inline constexpr double kRateFloor = 1e-12;
DecayRates decay_rates(const FlowSeries& series);
double tail_rate(const std::vector<double>& t, const std::vector<double>& y);

void write_csv(std::ostream& os, const FlowSeries& series);

}  // namespace fg
