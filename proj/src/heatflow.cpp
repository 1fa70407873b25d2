#include "fg/heatflow.hpp"

#include "fg/error.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

namespace fg {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Dense = Eigen::VectorXd;

double l2m(const WeightedSpace& s, const Dense& r) {
  const auto& m = s.cell_mass();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) acc += m[i] * r[i] * r[i];
  return std::sqrt(acc);
}

struct StepProblem {
  const DiffOperators& ops;
  const ScalarField& u;
  double tau;

  double objective(const ScalarField& v) const {
    const auto& m = ops.space().cell_mass();
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += m[i] * (v[i] - u[i]) * (v[i] - u[i]);
    return ops.energy(v) + acc / (2.0 * tau);
  }

  Dense residual(const ScalarField& v) const {
    const ScalarField lap = ops.laplacian(v);
    Dense r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - u[i] - tau * lap[i];
    return r;
  }
};

}  // namespace

FlowState observe(const DiffOperators& ops, double t, ScalarField u) {
  const auto& s = ops.space();
  FlowState st;
  st.t = t;
  st.mass = integrate(s, u);
  st.energy = ops.energy(u);
  ScalarField dev(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) dev[i] = (u[i] - st.mass) * (u[i] - st.mass);
  st.variance = integrate(s, dev);
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  st.min_u = *lo;
  st.max_u = *hi;
  if (st.min_u == st.max_u) {
    // Exact constants; the quadrature would leave round-off residue.
    st.variance = st.entropy = st.fisher = 0.0;
  } else if (st.min_u > 0.0) {
    ScalarField rho(u.size()), ent(u.size()), fis(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      rho[i] = std::max(u[i] / st.mass, 1e-14);
      ent[i] = rho[i] * std::log(rho[i]);
    }
    const ScalarField f2 = ops.sq_norm_gradient(rho);
    for (std::size_t i = 0; i < u.size(); ++i) fis[i] = f2[i] / rho[i];
    st.entropy = integrate(s, ent);
    st.fisher = integrate(s, fis);
  } else {
    st.entropy = st.fisher = std::numeric_limits<double>::quiet_NaN();
  }
  st.u = std::move(u);
  return st;
}

ScalarField step(const DiffOperators& ops, const ScalarField& u, double tau, double tol, int max_iter, int* iterations) {
  if (!(tau > 0.0)) throw DomainError("step: tau must be positive");
  if (!(tol > 0.0)) throw DomainError("step: tolerance must be positive");
  const auto& s = ops.space();
  const int d = s.dim();
  const auto n = static_cast<Eigen::Index>(s.size());
  const StepProblem prob{ops, u, tau};

  std::array<SpMat, kMaxDim> D;
  for (int k = 0; k < d; ++k) D[k] = ops.stencil().sparse(k);
  Dense mass(n);
  for (Eigen::Index i = 0; i < n; ++i) mass[i] = s.cell_mass()[i];

  ScalarField v = u;
  Dense r = prob.residual(v);
  double res = l2m(s, r);
  double phi = prob.objective(v);
  Eigen::SimplicialLDLT<SpMat> solver;
  int it = 0;
  while (res > tol) {
    if (it == max_iter) {
      throw SolverError("step: Newton did not converge in " + std::to_string(max_iter) +
                        " iterations, residual " + std::to_string(res));
    }
    ++it;
    const Linearization lin = ops.linearize(ops.gradient(v));
    SpMat J(n, n);
    J.reserve(Eigen::VectorXi::Constant(n, 1));
    for (Eigen::Index i = 0; i < n; ++i) J.insert(i, i) = mass[i];
    for (int k = 0; k < d; ++k) {
      for (int l = 0; l < d; ++l) {
        Dense w(n);
        for (Eigen::Index i = 0; i < n; ++i) w[i] = tau * mass[i] * lin.ginv[i][k * d + l];
        J += SpMat(D[k].transpose() * w.asDiagonal() * D[l]);
      }
    }
    solver.compute(J);
    if (solver.info() != Eigen::Success) throw SolverError("step: Jacobian factorization failed");
    const Dense rhs = -(mass.array() * r.array()).matrix();
    const Dense delta = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw SolverError("step: linear solve failed");

    // Armijo backtracking on the convex objective; its gradient is M r / tau.
    const double slope = -rhs.dot(delta) / tau;
    double alpha = 1.0;
    bool accepted = false;
    ScalarField trial(v.size());
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + alpha * delta[i];
      const double phi_trial = prob.objective(trial);
      if (phi_trial <= phi + 1e-4 * alpha * slope) {
        accepted = true;
        phi = phi_trial;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Objective differences at round-off level: take the full step if it
      // still reduces the optimality residual.
      for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + delta[i];
      const Dense r_full = prob.residual(trial);
      if (l2m(s, r_full) >= res) {
        throw SolverError("step: line search stalled, residual " + std::to_string(res));
      }
      phi = prob.objective(trial);
    }
    v.swap(trial);
    r = prob.residual(v);
    res = l2m(s, r);
  }
  if (iterations) *iterations = it;
  return v;
}

FlowSeries evolve(const DiffOperators& ops, const ScalarField& u0, const FlowParams& p) {
  if (!(p.tau > 0.0)) throw DomainError("evolve: tau must be positive");
  if (!(p.t_end >= 0.0)) throw DomainError("evolve: t_end must be nonnegative");
  if (p.stride < 1) throw DomainError("evolve: stride must be at least 1");
  if (u0.size() != ops.space().size()) throw DomainError("evolve: initial datum has wrong length");
  for (double x : u0) {
    if (!std::isfinite(x)) throw DomainError("evolve: initial datum is not finite");
  }
  FlowSeries series;
  series.tau = p.tau;
  const auto steps = static_cast<std::size_t>(std::llround(p.t_end / p.tau));
  series.steps = steps;
  series.states.push_back(observe(ops, 0.0, u0));
  series.min_u = series.states.back().min_u;
  series.max_u = series.states.back().max_u;
  ScalarField u = u0;
  for (std::size_t k = 1; k <= steps; ++k) {
    int it = 0;
    try {
      u = step(ops, u, p.tau, p.tol, p.max_iter, &it);
    } catch (const SolverError& e) {
      throw SolverError("evolve: step " + std::to_string(k) + " of " + std::to_string(steps) + ": " + e.what());
    }
    series.newton_iterations += static_cast<std::size_t>(it);
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    series.min_u = std::min(series.min_u, *lo);
    series.max_u = std::max(series.max_u, *hi);
    if (k % static_cast<std::size_t>(p.stride) == 0 || k == steps) {
      series.states.push_back(observe(ops, static_cast<double>(k) * p.tau, u));
    }
  }
  return series;
}

IdentityResidual check_dEdt_identity(const DiffOperators& ops, const FlowSeries& series, double t_min) {
  IdentityResidual out{"energy_rate", 0.0, 0, 0};
  const auto& st = series.states;
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 1; k + 1 < st.size(); ++k) {
    if (st[k].t < t_min) continue;
    const double dt = st[k + 1].t - st[k - 1].t;
    const ScalarField fp = ops.sq_norm_gradient(st[k + 1].u);
    const ScalarField fm = ops.sq_norm_gradient(st[k - 1].u);
    const ScalarField lap = ops.laplacian(st[k].u);
    const ScalarField rhs = ops.derivative_along_gradient(lap, st[k].u);
    const auto mask = identity_mask(ops, st[k].u);
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      if (!mask[i]) {
        ++out.nodes_excluded;
        continue;
      }
      const double lhs = (fp[i] - fm[i]) / dt;
      diff = std::max(diff, std::abs(lhs - 2.0 * rhs[i]));
      scale = std::max(scale, std::max(std::abs(lhs), std::abs(2.0 * rhs[i])));
      ++out.nodes_used;
    }
  }
  out.residual = scale > 0.0 ? diff / scale : 0.0;
  return out;
}

double tail_rate(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw DomainError("decay_rates: size mismatch");
  if (t.size() < 10) throw DomainError("decay_rates: at least 10 recorded samples are required");
  // Samples that have decayed to round-off relative to the start carry no rate information.
  std::size_t end = t.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::abs(y[i]) <= kRateFloor * std::abs(y[0])) {
      end = i;
      break;
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t i = end / 2; i < end; ++i) {
    if (y[i] > 0.0 && std::isfinite(y[i])) {
      xs.push_back(t[i]);
      ys.push_back(std::log(y[i]));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return -sxy / sxx;
}

DecayRates decay_rates(const FlowSeries& series) {
  std::vector<double> t, var, ent;
  for (const auto& s : series.states) {
    t.push_back(s.t);
    var.push_back(s.variance);
    ent.push_back(s.entropy);
  }
  return {tail_rate(t, var), tail_rate(t, ent)};
}

void write_csv(std::ostream& os, const FlowSeries& series) {
  const auto old = os.precision(17);
  os << "t,energy,variance,entropy,fisher\n";
  for (const auto& s : series.states) {
    os << s.t << ',' << s.energy << ',' << s.variance << ',' << s.entropy << ',' << s.fisher << '\n';
  }
  os.precision(old);
}

}  // namespace fg
