#pragma once

namespace fg {

struct ExponentTable {
  double N = 0.0;
  double p_basic_max = 0.0;     // 2(N+1)/N
  double p_extended_max = 0.0;  // where a0 reaches zero
  double p_critical = 0.0;      // 2N/(N-2)
  double b0_extremal = 0.0;     // b0 at p_critical
  double a0_extremal = 0.0;     // a0 at p_critical, negative
};

// Closed-form exponent ranges for the sharp Sobolev inequality. N > 2.
ExponentTable sobolev_exponent_table(double N);

struct AbSolution {
  double N = 0.0;
  double p = 0.0;
  double a0 = 0.0;
  double b0 = 0.0;
  double discriminant = 0.0;
  double residual_first = 0.0;
  double residual_second = 0.0;
  bool feasible = false;  // a0 >= 0 and b0 >= 0
};

// Larger root b0 of the quadratic in b, with a0 = b0/2 - (p-1)(N-1)/(N+2).
// Throws DomainError when the discriminant is negative.
AbSolution ab_parameter_solver(double N, double p);

// Bisection for the largest p with a feasible (a0, b0).
double ab_feasibility_boundary(double N, double tol = 1e-13);

}  // namespace fg
