#include "fg/inequalities.hpp"

#include "fg/curvature.hpp"
#include "fg/error.hpp"
#include "fg/identities.hpp"
#include "fg/transport.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>

namespace fg {

namespace {

void require_positive_K(double K, const char* who) {
  if (!(K > 0.0) || !std::isfinite(K)) throw DomainError(std::string(who) + ": requires K > 0");
}

// N in [n, inf], the range of the dimension-dependent inequalities.
void require_N_at_least_dim(double N, int n, const char* who) {
  validate_N(N, n);
  if (N < n) throw DomainError(std::string(who) + ": requires N >= n");
}

double mean(const WeightedSpace& s, const ScalarField& f) { return integrate(s, f); }

double variance(const WeightedSpace& s, const ScalarField& f) {
  const double mu = mean(s, f);
  ScalarField d(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) d[i] = (f[i] - mu) * (f[i] - mu);
  return integrate(s, d);
}

ScalarField squared(const ScalarField& f) {
  ScalarField g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = f[i] * f[i];
  return g;
}

ScalarField scaled(const ScalarField& f, double c) {
  ScalarField g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = c * f[i];
  return g;
}

// Entropy of f^2 m for int f^2 = 1.
double entropy_of_square(const WeightedSpace& s, const ScalarField& f) {
  ScalarField e(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double q = f[i] * f[i];
    e[i] = q > 0.0 ? q * std::log(q) : 0.0;
  }
  return integrate(s, e);
}

}  // namespace

CheckReport make_report(std::string id, double N, double K, double lhs, double rhs, double tol_rel) {
  CheckReport r;
  r.id = std::move(id);
  r.N = N;
  r.K = K;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.tol_rel = tol_rel;
  // An infinite rhs with tol_rel = 0 must not turn the slack into NaN.
  const double slack = tol_rel == 0.0 ? 0.0 : tol_rel * std::abs(rhs);
  r.pass = r.margin >= -(slack + kRoundoffFloor);
  return r;
}

double sharp_coefficient(double N, double K) {
  if (std::isinf(N)) return 1.0 / K;
  return (N - 1.0) / (K * N);
}

double split_energy(const DiffOperators& ops, const ScalarField& f) {
  const auto& F = ops.norm();
  const CovectorField df = ops.differential(f);
  ScalarField e(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Covector a = df.at(i);
    const double fs = f[i] >= 0.0 ? F.eval_dual(a) : F.eval_dual(-a);
    e[i] = fs * fs;
  }
  return 0.5 * integrate(ops.space(), e);
}

double lp_norm(const WeightedSpace& space, const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be at least 1");
  ScalarField g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::pow(std::abs(f[i]), p);
  return std::pow(integrate(space, g), 1.0 / p);
}

std::vector<CheckReport> check_integrated_bochner(const DiffOperators& ops, const ScalarField& f, double N, double K,
                                                  double tol) {
  validate_N(N, ops.space().dim());
  const auto& s = ops.space();
  const ScalarField lap = ops.laplacian(f);
  const double f2 = 2.0 * ops.energy(f);
  const double lap2 = integrate(s, squared(lap));
  const double cross = integrate(s, ops.derivative_along_gradient(lap, f));
  const double inv_n = std::isinf(N) ? 0.0 : 1.0 / N;
  std::vector<CheckReport> out;
  out.push_back(make_report("bochner_integrated", N, K, K * f2 + inv_n * lap2, -cross, tol));
  if (K > 0.0) out.push_back(make_report("lichnerowicz", N, K, f2, sharp_coefficient(N, K) * lap2, tol));
  return out;
}

CheckReport check_bochner_pointwise(const DiffOperators& ops, const ScalarField& f, double N, double K, double tol,
                                    std::vector<char> mask) {
  validate_N(N, ops.space().dim());
  if (mask.empty()) mask = identity_mask(ops, f);
  const ScalarField g2 = ops.gamma2(f);
  const ScalarField f2 = ops.sq_norm_gradient(f);
  const ScalarField lap = ops.laplacian(f);
  const double inv_n = std::isinf(N) ? 0.0 : 1.0 / N;
  double worst = std::numeric_limits<double>::infinity();
  double lhs = 0.0, rhs = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask[i]) continue;
    ++used;
    const double l = K * f2[i] + inv_n * lap[i] * lap[i];
    if (g2[i] - l < worst) {
      worst = g2[i] - l;
      lhs = l;
      rhs = g2[i];
    }
  }
  CheckReport r;
  r.id = "bochner_pointwise";
  r.N = N;
  r.K = K;
  r.tol_rel = tol;
  if (used == 0) {
    r.pass = true;
    r.flags.push_back("no_nodes");
    return r;
  }
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = worst;
  r.pass = worst >= -tol;
  r.flags.push_back("absolute_tolerance");
  r.params["nodes"] = static_cast<double>(used);
  return r;
}

CheckReport check_poincare(const DiffOperators& ops, const ScalarField& f, double N, double K, double tol) {
  validate_N(N, ops.space().dim());
  require_positive_K(K, "check_poincare");
  return make_report("poincare", N, K, variance(ops.space(), f), sharp_coefficient(N, K) * 2.0 * ops.energy(f), tol);
}

namespace {

std::vector<ScalarField> smooth_basis(const WeightedSpace& s) {
  const auto& d = s.domain();
  const int dim = d.dim();
  auto reduced = [&](std::size_t i, int axis) {
    const double x = s.coord(i, axis);
    if (d.periodic()) return 2.0 * M_PI * (x - d.origin(axis)) / d.length[axis];
    return 2.0 * (x - d.origin(axis)) / d.length[axis] - 1.0;
  };
  std::vector<std::function<double(double, double)>> gens;
  if (dim == 1) {
    if (d.periodic()) {
      for (int k = 1; k <= 8; ++k) {
        gens.push_back([k](double p, double) { return std::cos(k * p); });
        gens.push_back([k](double p, double) { return std::sin(k * p); });
      }
    } else {
      for (int k = 1; k <= 5; ++k) gens.push_back([k](double x, double) { return std::pow(x, k); });
      for (int k = 1; k <= 12; ++k) gens.push_back([k](double x, double) { return std::cos(k * M_PI * (x + 1) / 2); });
    }
  } else {
    for (int k = 0; k <= 3; ++k) {
      for (int l = 0; l <= 3 - k; ++l) {
        if (k + l == 0) continue;
        if (d.periodic()) {
          for (int sgn : {1, -1}) {
            if (sgn < 0 && (k == 0 || l == 0)) continue;
            gens.push_back([k, l, sgn](double p, double q) { return std::cos(k * p + sgn * l * q); });
            gens.push_back([k, l, sgn](double p, double q) { return std::sin(k * p + sgn * l * q); });
          }
        } else {
          gens.push_back([k, l](double x, double y) { return std::pow(x, k) * std::pow(y, l); });
          gens.push_back([k, l](double x, double y) {
            return std::cos(k * M_PI * (x + 1) / 2) * std::cos(l * M_PI * (y + 1) / 2);
          });
        }
      }
    }
  }
  // Modified Gram-Schmidt in L2(m) on mean-zero parts; near-dependent members are dropped.
  std::vector<ScalarField> basis;
  for (const auto& g : gens) {
    ScalarField b(s.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = g(reduced(i, 0), dim == 2 ? reduced(i, 1) : 0.0);
    const double mu = integrate(s, b);
    for (auto& v : b) v -= mu;
    const double n0 = std::sqrt(integrate(s, squared(b)));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : basis) {
        ScalarField prod(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) prod[i] = b[i] * e[i];
        const double c = integrate(s, prod);
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= c * e[i];
      }
    }
    const double n1 = std::sqrt(integrate(s, squared(b)));
    if (n1 < 1e-8 * n0) continue;
    for (auto& v : b) v /= n1;
    basis.push_back(std::move(b));
  }
  return basis;
}

}  // namespace

PoincareEstimate estimate_poincare_constant(const DiffOperators& ops, const TestBank& bank, int max_iter) {
  const auto& s = ops.space();
  PoincareEstimate est;
  for (const auto& m : bank.members()) {
    const double e2 = 2.0 * ops.energy(m.f);
    if (e2 <= 0.0) continue;
    const double r = variance(s, m.f) / e2;
    if (r > est.best_bank) {
      est.best_bank = r;
      est.best = m.name;
    }
  }
  est.value = est.best_bank;

  const auto basis = smooth_basis(s);
  const auto nb = static_cast<Eigen::Index>(basis.size());
  if (nb == 0) return est;
  auto synth = [&](const Eigen::VectorXd& c) {
    ScalarField f(s.size(), 0.0);
    for (Eigen::Index k = 0; k < nb; ++k)
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += c[k] * basis[k][i];
    return f;
  };
  // On the unit sphere Var = |c|^2 = 1, so maximizing the quotient means
  // minimizing 2E(c), whose gradient is -2 int b_k Lap f dm.
  auto energy2 = [&](const Eigen::VectorXd& c) { return 2.0 * ops.energy(synth(c)); };
  auto grad = [&](const Eigen::VectorXd& c) {
    const ScalarField lap = ops.laplacian(synth(c));
    Eigen::VectorXd g(nb);
    for (Eigen::Index k = 0; k < nb; ++k) {
      ScalarField prod(lap.size());
      for (std::size_t i = 0; i < lap.size(); ++i) prod[i] = basis[k][i] * lap[i];
      g[k] = -2.0 * integrate(s, prod);
    }
    return g;
  };

  for (Eigen::Index start = 0; start < 2 * nb; ++start) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nb);
    c[start / 2] = (start % 2 == 0) ? 1.0 : -1.0;
    double e = energy2(c);
    double step = 1.0 / std::max(e, 1e-300);
    for (int it = 0; it < max_iter; ++it) {
      ++est.ascent_iterations;
      Eigen::VectorXd g = grad(c);
      g -= g.dot(c) * c;  // tangent to the sphere
      if (g.norm() < 1e-12 * std::max(e, 1e-300)) break;
      bool moved = false;
      for (int ls = 0; ls < 30; ++ls) {
        Eigen::VectorXd trial = c - step * g;
        trial.normalize();
        const double et = energy2(trial);
        if (et < e - 1e-4 * step * g.squaredNorm()) {
          c = trial;
          e = et;
          step *= 1.5;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (e > 0.0 && 1.0 / e > est.value) {
      est.value = 1.0 / e;
      est.best = "ascent";
    }
  }
  return est;
}

CheckReport check_logsobolev(const DiffOperators& ops, const ScalarField& f, double N, double K, double tol) {
  validate_N(N, ops.space().dim());
  require_positive_K(K, "check_logsobolev");
  const auto& s = ops.space();
  for (double v : f) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("check_logsobolev: f must be finite and nonnegative");
  }
  const double mass = integrate(s, f);
  if (!(mass > 0.0)) throw DomainError("check_logsobolev: f has zero mass");
  std::vector<std::string> flags;
  ScalarField g = f;
  if (std::abs(mass - 1.0) > 1e-12) {
    g = scaled(f, 1.0 / mass);
    flags.push_back("normalized");
  }
  ScalarField ent(g.size()), fis(g.size());
  const ScalarField f2 = ops.sq_norm_gradient(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    ent[i] = g[i] > 0.0 ? g[i] * std::log(g[i]) : 0.0;
    fis[i] = g[i] > 0.0 ? f2[i] / g[i] : 0.0;
  }
  const double coef = 0.5 * sharp_coefficient(N, K);
  auto r = make_report("logsobolev", N, K, integrate(s, ent), coef * integrate(s, fis), tol);
  r.flags = flags;
  if (N < 0.0) r.flags.push_back("experimental");
  return r;
}

CheckReport check_gamma2_integral(const DiffOperators& ops, const ScalarField& u, double N, double K, double tol) {
  validate_N(N, ops.space().dim());
  require_positive_K(K, "check_gamma2_integral");
  const auto& s = ops.space();
  ScalarField lg(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0)) throw DomainError("check_gamma2_integral: u must be positive");
    lg[i] = std::log(u[i]);
  }
  const ScalarField f2 = ops.sq_norm_gradient(lg);
  const ScalarField g2 = ops.gamma2(lg);
  ScalarField a(u.size()), b(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    a[i] = u[i] * f2[i];
    b[i] = u[i] * g2[i];
  }
  return make_report("gamma2_integral", N, K, integrate(s, a), sharp_coefficient(N, K) * integrate(s, b), tol);
}

CheckReport check_talagrand(const WeightedSpace& space, const ProbabilityVector& mu, double N, double K, double tol) {
  require_N_at_least_dim(N, space.dim(), "check_talagrand");
  require_positive_K(K, "check_talagrand");
  const double ent = relative_entropy(space, mu);
  if (!std::isfinite(ent)) throw DomainError("check_talagrand: infinite entropy");
  const double w2 = w2_squared(space, mu, ProbabilityVector::reference(space));
  return make_report("talagrand", N, K, w2, 2.0 * sharp_coefficient(N, K) * ent, tol);
}

CheckReport check_entropy_energy(const DiffOperators& ops, const ScalarField& f, double N, double K, double tol) {
  require_N_at_least_dim(N, ops.space().dim(), "check_entropy_energy");
  if (std::isinf(N)) throw DomainError("check_entropy_energy: requires finite N");
  require_positive_K(K, "check_entropy_energy");
  const auto& s = ops.space();
  const double norm2 = lp_norm(s, f, 2.0);
  if (!(norm2 > 0.0)) throw DomainError("check_entropy_energy: f vanishes");
  std::vector<std::string> flags;
  ScalarField g = f;
  if (std::abs(norm2 - 1.0) > 1e-12) {
    g = scaled(f, 1.0 / norm2);
    flags.push_back("normalized");
  }
  const double grad2 = 2.0 * split_energy(ops, g);
  auto r = make_report("entropy_energy", N, K, entropy_of_square(s, g), 0.5 * N * std::log1p(4.0 / (K * N) * grad2), tol);
  r.flags = flags;
  return r;
}

CheckReport check_nash(const DiffOperators& ops, const ScalarField& f, double N, double K, double tol) {
  require_N_at_least_dim(N, ops.space().dim(), "check_nash");
  if (std::isinf(N)) throw DomainError("check_nash: requires finite N");
  require_positive_K(K, "check_nash");
  const auto& s = ops.space();
  const double n2 = lp_norm(s, f, 2.0);
  if (!(n2 > 0.0)) return make_report("nash", N, K, 0.0, 0.0, tol);
  // Both sides are homogeneous of degree N + 2; after |f|_2 = 1 the left is 1.
  const ScalarField g = scaled(f, 1.0 / n2);
  const double n1 = lp_norm(s, g, 1.0);
  const double rhs = std::pow(1.0 + 4.0 / (K * N) * split_energy(ops, g), 0.5 * N) * n1 * n1;
  return make_report("nash", N, K, 1.0, rhs, tol);
}

CheckReport check_nonsharp_sobolev(const DiffOperators& ops, const ScalarField& f, double N, double K, double tol) {
  require_N_at_least_dim(N, ops.space().dim(), "check_nonsharp_sobolev");
  if (!(N > 2.0) || std::isinf(N)) throw DomainError("check_nonsharp_sobolev: requires 2 < N < inf");
  require_positive_K(K, "check_nonsharp_sobolev");
  const auto& s = ops.space();
  const double p = 2.0 * N / (N - 2.0);
  const double lp = lp_norm(s, f, p);
  const double l2 = lp_norm(s, f, 2.0);
  const double c = std::pow(2.0, 4.0 * N / (N - 2.0));
  auto r = make_report("sobolev_nonsharp", N, K, lp * lp, c * (4.0 / 3.0 * l2 * l2 + 4.0 / (K * N) * split_energy(ops, f)), tol);
  r.params["p"] = p;
  return r;
}

double sobolev_lhs(const WeightedSpace& space, const ScalarField& f, double p) {
  const double l2sq = std::pow(lp_norm(space, f, 2.0), 2);
  if (std::abs(p - 2.0) < 1e-12) {
    if (l2sq == 0.0) return 0.0;
    ScalarField e(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double q = f[i] * f[i];
      e[i] = q > 0.0 ? q * std::log(q / l2sq) : 0.0;
    }
    return 0.5 * integrate(space, e);
  }
  return (std::pow(lp_norm(space, f, p), 2) - l2sq) / (p - 2.0);
}

CheckReport check_sobolev(const DiffOperators& ops, const ScalarField& f, double p, double N, double K, double tol) {
  require_N_at_least_dim(N, ops.space().dim(), "check_sobolev");
  if (std::isinf(N)) throw DomainError("check_sobolev: N = inf uses check_sobolev_inf");
  require_positive_K(K, "check_sobolev");
  const double pmax = 2.0 * (N + 1.0) / N;
  if (!(p >= 1.0) || p > pmax + 1e-12) throw DomainError("check_sobolev: p outside [1, 2(N+1)/N]");
  auto r = make_report("sobolev", N, K, sobolev_lhs(ops.space(), f, p),
                       sharp_coefficient(N, K) * 2.0 * split_energy(ops, f), tol);
  r.params["p"] = p;
  if (std::abs(p - 2.0) < 1e-12) r.flags.push_back("logsobolev_limit");
  return r;
}

CheckReport check_sobolev_inf(const DiffOperators& ops, const ScalarField& f, double p, double K, double tol) {
  require_positive_K(K, "check_sobolev_inf");
  if (!(p >= 1.0) || p > 2.0) throw DomainError("check_sobolev_inf: p outside [1, 2]");
  auto r = make_report("sobolev_inf", kInfiniteN, K, sobolev_lhs(ops.space(), f, p), 2.0 * split_energy(ops, f) / K, tol);
  r.params["p"] = p;
  if (std::abs(p - 2.0) < 1e-12) r.flags.push_back("logsobolev_limit");
  return r;
}

}  // namespace fg
