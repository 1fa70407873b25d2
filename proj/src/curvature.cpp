#include "fg/curvature.hpp"

#include "fg/error.hpp"

#include <cmath>
#include <string>

namespace fg {

void validate_N(double N, int n) {
  if (std::isnan(N) || N == -kInfiniteN) throw DomainError("curvature: N must be a number in (-inf, 0) or [n, inf]");
  if (N >= 0.0 && N < n) {
    throw DomainError("curvature: N = " + std::to_string(N) + " lies in the excluded range [0, " + std::to_string(n) + ")");
  }
}

RicciField::RicciField(const WeightedSpace& space, Exec exec)
    : space_(space), exec_(exec), dpsi_(space.dim(), space.size()), hess_(space.size()) {
  const Stencil st(space.domain());
  const int d = space.dim();
  for (int k = 0; k < d; ++k) st.apply(k, space.psi().data(), dpsi_.comp[k].data(), exec);
  std::vector<double> tmp(space.size());
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      st.apply(k, dpsi_.comp[l].data(), tmp.data(), exec);
      for (std::size_t i = 0; i < tmp.size(); ++i) hess_[i][k * d + l] = tmp[i];
    }
  }
  if (d == 2) {
    for (auto& h : hess_) h[1] = h[2] = 0.5 * (h[1] + h[2]);
  }
}

double RicciField::operator()(std::size_t node, const Vec& v, double N) const {
  const int n = space_.dim();
  validate_N(N, n);
  if (v.size() != n) throw DomainError("curvature: direction has wrong dimension");
  if (v.norm() == 0.0) throw DomainError("curvature: direction must be nonzero");
  const auto& H = hess_[node];
  double hvv = 0.0, dv = 0.0;
  for (int k = 0; k < n; ++k) {
    dv += dpsi_.comp[k][node] * v[k];
    for (int l = 0; l < n; ++l) hvv += H[k * n + l] * v[k] * v[l];
  }
  if (std::isinf(N)) return hvv;
  if (N == n) {
    // Only the limit with vanishing first derivative along v is finite.
    if (std::abs(dv) > 1e-12 * (1.0 + v.norm())) {
      throw DomainError("curvature: N = n requires DPsi(v) = 0");
    }
    return hvv;
  }
  return hvv - dv * dv / (N - n);
}

std::vector<Vec> RicciField::unit_directions(int samples) const {
  const auto& F = space_.norm();
  std::vector<Vec> dirs;
  if (space_.dim() == 1) {
    Vec p(1), m(1);
    p << 1.0;
    m << -1.0;
    dirs.push_back(p / F.eval(p));
    dirs.push_back(m / F.eval(m));
    return dirs;
  }
  if (samples < 4) throw DomainError("curvature: at least 4 direction samples are required");
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * M_PI * k / samples;
    Vec w(2);
    w << std::cos(t), std::sin(t);
    dirs.push_back(w / F.eval(w));
  }
  return dirs;
}

CurvatureReport RicciField::effective_K(const CurvatureQuery& q) const {
  validate_N(q.N, space_.dim());
  const auto dirs = unit_directions(q.directions);
  const std::size_t n = space_.size();
  std::vector<double> best(n);
  std::vector<int> arg(n);
  for_each_node(exec_, n, [&](std::size_t i) {
    double b = kInfiniteN;
    int a = 0;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      const double r = (*this)(i, dirs[j], q.N);
      if (r < b) {
        b = r;
        a = static_cast<int>(j);
      }
    }
    best[i] = b;
    arg[i] = a;
  });
  CurvatureReport rep;
  rep.N = q.N;
  rep.nodes = n;
  rep.directions = static_cast<int>(dirs.size());
  rep.K_eff = kInfiniteN;
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] < rep.K_eff) {
      rep.K_eff = best[i];
      rep.argmin_node = i;
    }
  }
  rep.argmin_direction = dirs[arg[rep.argmin_node]];
  return rep;
}

double ricci_N(const WeightedSpace& space, std::size_t node, const Vec& v, double N) {
  return RicciField(space, Exec::Serial)(node, v, N);
}

CurvatureReport effective_K(const WeightedSpace& space, const CurvatureQuery& query) {
  return RicciField(space).effective_K(query);
}

}  // namespace fg
