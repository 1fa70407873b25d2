#include "fg/sobolev_algebra.hpp"

#include "fg/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fg {

namespace {

void require_N(double N, const char* who) {
  if (!(N > 2.0) || std::isinf(N)) throw DomainError(std::string(who) + ": N must be finite and > 2");
}

// Both coefficient-matching equations, as left minus right.
void residuals(AbSolution& s) {
  const double N = s.N, p = s.p, a = s.a0, b = s.b0;
  s.residual_first = (p - 1.0 - b / 2.0) - (3.0 * b - 2.0 * (N + 2.0) * a) / (2.0 * (N - 1.0));
  s.residual_second = (p - 2.0) * (b - 1.0) - ((a - b) * (a - b) - N * a * a) / (N - 1.0);
}

}  // namespace

ExponentTable sobolev_exponent_table(double N) {
  require_N(N, "sobolev_exponent_table");
  ExponentTable t;
  t.N = N;
  t.p_basic_max = 2.0 * (N + 1.0) / N;
  t.p_extended_max = (7.0 * N * N + 2.0 * N + (N + 2.0) * std::sqrt(N * N + 8.0 * N)) / (4.0 * N * (N - 1.0));
  t.p_critical = 2.0 * N / (N - 2.0);
  t.b0_extremal = 2.0 * (N - 3.0) / (N - 2.0);
  t.a0_extremal = -2.0 / (N - 2.0);
  if (!(t.p_basic_max <= t.p_extended_max && t.p_extended_max <= t.p_critical))
    throw SolverError("sobolev_exponent_table: exponent ordering violated");
  return t;
}

AbSolution ab_parameter_solver(double N, double p) {
  require_N(N, "ab_parameter_solver");
  AbSolution s;
  s.N = N;
  s.p = p;
  const double q = p - 1.0;
  // The second factor vanishes at p = 2N/(N-2); snap its round-off to zero.
  const double t = (2.0 - N) * q / (N + 2.0);
  double inner = 1.0 + t;
  if (std::abs(inner) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(t))) inner = 0.0;
  const double disc = N * q / (N + 2.0) * inner;
  if (!(disc >= 0.0)) throw DomainError("ab_parameter_solver: negative discriminant, p outside [1, 2N/(N-2)]");
  s.discriminant = disc;
  s.b0 = 2.0 * (1.0 - q / (N + 2.0)) + 2.0 * std::sqrt(disc);
  s.a0 = s.b0 / 2.0 - q * (N - 1.0) / (N + 2.0);
  s.feasible = s.a0 >= 0.0 && s.b0 >= 0.0;
  residuals(s);
  if (std::abs(s.residual_first) > 1e-10 || std::abs(s.residual_second) > 1e-10)
    throw SolverError("ab_parameter_solver: residual above 1e-10");
  return s;
}

double ab_feasibility_boundary(double N, double tol) {
  const auto t = sobolev_exponent_table(N);
  double lo = t.p_basic_max, hi = t.p_critical;
  if (!ab_parameter_solver(N, lo).feasible) throw SolverError("ab_feasibility_boundary: infeasible at 2(N+1)/N");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (ab_parameter_solver(N, mid).feasible ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace fg
