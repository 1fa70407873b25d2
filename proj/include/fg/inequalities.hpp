#pragma once

#include "fg/bank.hpp"
#include "fg/calculus.hpp"

#include <map>
#include <string>
#include <vector>

namespace fg {

inline constexpr double kExactTol = 1e-6;   // checks on exact or closed-form data
inline constexpr double kSweepTol = 2e-2;   // discretization-grade sweeps
// Absolute slack added to every threshold so that two sides that are both
// zero up to round-off (constants, u = 1) compare equal.
inline constexpr double kRoundoffFloor = 1e-13;

// One verdict: the inequality lhs <= rhs, with pass iff
// margin = rhs - lhs >= -(tol_rel |rhs| + kRoundoffFloor).
struct CheckReport {
  std::string id;
  double N = 0.0;
  double K = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  double tol_rel = kSweepTol;
  std::string subject;                 // test function description
  std::map<std::string, double> params;  // p, grid size, ...
  std::vector<std::string> flags;      // e.g. "normalized", "experimental"
};

CheckReport make_report(std::string id, double N, double K, double lhs, double rhs, double tol_rel);

// (N-1)/(KN), read as 1/K at N = inf.
double sharp_coefficient(double N, double K);

// 1/2 integral of F^2(grad |f|), evaluated nodewise as F*(Df)^2 where f >= 0
// and F*(-Df)^2 where f < 0, i.e. F on the positive part and the reverse
// norm on the negative part. Equals energy(f) for nonnegative f.
double split_energy(const DiffOperators& ops, const ScalarField& f);

// L^p(m) norm of |f|.
double lp_norm(const WeightedSpace& space, const ScalarField& f, double p);

// K int F^2(grad f) + int (Lap f)^2 / N <= -int D[Lap f](grad f); when K > 0
// also the dual form int F^2(grad f) <= (N-1)/(KN) int (Lap f)^2.
std::vector<CheckReport> check_integrated_bochner(const DiffOperators& ops, const ScalarField& f, double N, double K,
                                                  double tol = kSweepTol);

// min over nodes of Gamma_2(f) - K F^2(grad f) - (Lap f)^2/N >= -tol (absolute),
// over nodes `mask` (interior nodes away from gradient zeros when empty).
CheckReport check_bochner_pointwise(const DiffOperators& ops, const ScalarField& f, double N, double K,
                                    double tol = kSweepTol, std::vector<char> mask = {});

// Var(f) <= (N-1)/(KN) int F^2(grad f).
CheckReport check_poincare(const DiffOperators& ops, const ScalarField& f, double N, double K, double tol = kSweepTol);

struct PoincareEstimate {
  double value = 0.0;           // sup Var(f) / int F^2(grad f) found
  std::string best;             // bank member or "ascent"
  double best_bank = 0.0;       // best ratio over the bank alone
  int ascent_iterations = 0;
};

// Lower bound for the sharp Poincare constant: the best bank ratio, refined by
// projected gradient ascent of the Rayleigh quotient in the coefficients of a
// smooth L2(m)-orthonormal basis (polynomials and Neumann cosines, or Fourier
// modes on periodic axes), started from every basis element with both signs.
PoincareEstimate estimate_poincare_constant(const DiffOperators& ops, const TestBank& bank, int max_iter = 400);

// Ent(f m) <= (N-1)/(2KN) int_{f>0} F^2(grad f)/f for f >= 0, int f = 1
// (rescaled and flagged otherwise). N = inf uses 1/(2K); N < 0 is allowed but
// flagged experimental.
CheckReport check_logsobolev(const DiffOperators& ops, const ScalarField& f, double N, double K, double tol = kSweepTol);

// int u F^2(grad log u) <= (N-1)/(KN) int u Gamma_2(log u), u > 0.
CheckReport check_gamma2_integral(const DiffOperators& ops, const ScalarField& u, double N, double K,
                                  double tol = kSweepTol);

// W_2^2(mu, m) <= 2(N-1)/(KN) Ent(mu | m), mu the source of the transport.
CheckReport check_talagrand(const WeightedSpace& space, const ProbabilityVector& mu, double N, double K,
                            double tol = kSweepTol);

// Ent(f^2 m) <= (N/2) log(1 + 4/(KN) int F^2(grad |f|)), int f^2 = 1 (rescaled and flagged otherwise).
CheckReport check_entropy_energy(const DiffOperators& ops, const ScalarField& f, double N, double K,
                                 double tol = kSweepTol);

// |f|_2^{N+2} <= (|f|_2^2 + 4/(KN) E(|f|))^{N/2} |f|_1^2, evaluated after scaling |f|_2 = 1.
CheckReport check_nash(const DiffOperators& ops, const ScalarField& f, double N, double K, double tol = kSweepTol);

// |f|_p^2 <= 2^{4N/(N-2)} ((4/3)|f|_2^2 + 4/(KN) E(|f|)), p = 2N/(N-2), N > 2.
CheckReport check_nonsharp_sobolev(const DiffOperators& ops, const ScalarField& f, double N, double K,
                                   double tol = kSweepTol);

// Left side of the Sobolev family, (|f|_p^2 - |f|_2^2)/(p - 2), with its
// limit (1/2) int f^2 log(f^2 / |f|_2^2) at p = 2.
double sobolev_lhs(const WeightedSpace& space, const ScalarField& f, double p);

// (|f|_p^2 - |f|_2^2)/(p-2) <= (N-1)/(KN) int F^2(grad |f|), 1 <= p <= 2(N+1)/N, N in [n, inf).
CheckReport check_sobolev(const DiffOperators& ops, const ScalarField& f, double p, double N, double K,
                          double tol = kSweepTol);

// Same family with constant 1/K for 1 <= p <= 2.
CheckReport check_sobolev_inf(const DiffOperators& ops, const ScalarField& f, double p, double K,
                              double tol = kSweepTol);

}  // namespace fg
