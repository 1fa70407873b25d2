#include "fg/norm.hpp"

#include "fg/error.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <numbers>

namespace fg {

namespace {

constexpr int kDualSamples = 256;
constexpr double kLegendreTol = 1e-10;
constexpr double kMaxRandersDrift = 0.99;

void require_spd(const Mat& A, const char* who) {
  if (A.rows() < 1 || A.rows() > kMaxDim || A.rows() != A.cols()) {
    throw DomainError(std::string(who) + ": matrix must be square of size 1 or 2");
  }
  if (!A.allFinite() || (A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * A.cwiseAbs().maxCoeff()) {
    throw DomainError(std::string(who) + ": matrix must be finite and symmetric");
  }
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) {
    throw DomainError(std::string(who) + ": matrix must be positive-definite");
  }
}

Vec unit_direction(double theta) {
  Vec u(2);
  u << std::cos(theta), std::sin(theta);
  return u;
}

}  // namespace

MinkowskiNorm MinkowskiNorm::euclidean(const Mat& A) {
  require_spd(A, "EuclideanLike");
  MinkowskiNorm n(static_cast<int>(A.rows()), EuclideanLike{A});
  n.a_inv_ = A.inverse();
  return n;
}

MinkowskiNorm MinkowskiNorm::randers(const Mat& A, const Vec& b) {
  require_spd(A, "Randers");
  if (b.size() != A.rows() || !b.allFinite()) {
    throw DomainError("Randers: drift b must be finite with the dimension of A");
  }
  MinkowskiNorm n(static_cast<int>(A.rows()), Randers{A, b});
  n.a_inv_ = A.inverse();
  const double drift = n.randers_drift();
  if (!(drift <= kMaxRandersDrift)) {
    throw DomainError("Randers: sqrt(b^T A^-1 b) = " + std::to_string(drift) +
                      " exceeds the admissible bound 0.99");
  }
  return n;
}

MinkowskiNorm MinkowskiNorm::asym1d(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("Asym1D: slopes must be positive and finite");
  }
  return MinkowskiNorm(1, Asym1D{alpha, beta});
}

double MinkowskiNorm::randers_drift() const {
  if (const auto* r = std::get_if<Randers>(&variant_)) {
    return std::sqrt(r->b.dot(a_inv_ * r->b));
  }
  return 0.0;
}

bool MinkowskiNorm::operator==(const MinkowskiNorm& other) const {
  if (dim_ != other.dim_ || variant_.index() != other.variant_.index()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(other.variant_);
        if constexpr (std::is_same_v<T, EuclideanLike>) {
          return lhs.A == rhs.A;
        } else if constexpr (std::is_same_v<T, Randers>) {
          return lhs.A == rhs.A && lhs.b == rhs.b;
        } else {
          return lhs.alpha == rhs.alpha && lhs.beta == rhs.beta;
        }
      },
      variant_);
}

double MinkowskiNorm::eval(const Vector& v) const {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EuclideanLike>) {
          return std::sqrt(std::max(0.0, v.dot(n.A * v)));
        } else if constexpr (std::is_same_v<T, Randers>) {
          return std::sqrt(std::max(0.0, v.dot(n.A * v))) + n.b.dot(v);
        } else {
          return v[0] >= 0.0 ? n.alpha * v[0] : -n.beta * v[0];
        }
      },
      variant_);
}

Covector MinkowskiNorm::half_sq_gradient(const Vector& v) const {
  return std::visit(
      [&](const auto& n) -> Covector {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EuclideanLike>) {
          return n.A * v;
        } else if constexpr (std::is_same_v<T, Randers>) {
          const double q = std::sqrt(std::max(0.0, v.dot(n.A * v)));
          if (q == 0.0) return Covector::Zero(dim_);
          const double f = q + n.b.dot(v);
          return f * ((n.A * v) / q + n.b);
        } else {
          Covector g(1);
          g[0] = (v[0] >= 0.0 ? n.alpha * n.alpha : n.beta * n.beta) * v[0];
          return g;
        }
      },
      variant_);
}

double MinkowskiNorm::eval_dual(const Covector& a) const {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EuclideanLike>) {
          return std::sqrt(std::max(0.0, a.dot(a_inv_ * a)));
        } else if constexpr (std::is_same_v<T, Randers>) {
          return randers_dual_numeric(a);
        } else {
          return a[0] >= 0.0 ? a[0] / n.alpha : -a[0] / n.beta;
        }
      },
      variant_);
}

double MinkowskiNorm::randers_dual_numeric(const Covector& a) const {
  if (a.isZero(0.0)) return 0.0;
  if (dim_ == 1) {
    Vec plus(1), minus(1);
    plus[0] = 1.0 / eval(Vec::Ones(1));
    minus[0] = -1.0 / eval(-Vec::Ones(1));
    return std::max(a.dot(plus), a.dot(minus));
  }
  // a(u)/F(u) over the circle of directions u.
  auto ratio = [&](double theta) {
    const Vec u = unit_direction(theta);
    return a.dot(u) / eval(u);
  };
  const double step = 2.0 * std::numbers::pi / kDualSamples;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kDualSamples; ++k) {
    const double val = ratio(k * step);
    if (val > best_val) {
      best_val = val;
      best = k;
    }
  }
  const auto polished = boost::math::tools::brent_find_minima(
      [&](double theta) { return -ratio(theta); }, (best - 1) * step, (best + 1) * step,
      std::numeric_limits<double>::digits);
  return std::max(best_val, -polished.second);
}

Vector MinkowskiNorm::legendre(const Covector& a) const {
  if (a.isZero(0.0)) return Vector::Zero(dim_);
  Vector v = std::visit(
      [&](const auto& n) -> Vector {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EuclideanLike>) {
          return a_inv_ * a;
        } else if constexpr (std::is_same_v<T, Randers>) {
          return randers_legendre(a);
        } else {
          Vector out(1);
          out[0] = a[0] >= 0.0 ? a[0] / (n.alpha * n.alpha) : a[0] / (n.beta * n.beta);
          return out;
        }
      },
      variant_);

  const double dual = eval_dual(a);
  const double fv = eval(v);
  const double pairing = a.dot(v);
  if (std::abs(fv - dual) > kLegendreTol * dual ||
      std::abs(pairing - dual * dual) > kLegendreTol * dual * dual) {
    throw SolverError("legendre: verification failed (F(v)=" + std::to_string(fv) +
                      ", F*(a)=" + std::to_string(dual) + ", a(v)=" + std::to_string(pairing) + ")");
  }
  return v;
}

Vector MinkowskiNorm::randers_legendre(const Covector& a) const {
  // Initial guess from (1/2) d[(F*)^2]/da by central differences.
  const double scale = a.norm();
  const double da = 1e-5 * scale;
  Vector v(dim_);
  for (int j = 0; j < dim_; ++j) {
    Covector ap = a, am = a;
    ap[j] += da;
    am[j] -= da;
    const double fp = eval_dual(ap), fm = eval_dual(am);
    v[j] = 0.5 * (fp * fp - fm * fm) / (2.0 * da);
  }
  // Newton polish on g_v(v, .) = a.
  for (int it = 0; it < 50; ++it) {
    const Covector res = half_sq_gradient(v) - a;
    if (res.norm() <= 1e-15 * scale) break;
    const Mat g = metric_tensor(v);
    v -= g.ldlt().solve(res);
  }
  return v;
}

MetricTensor MinkowskiNorm::metric_tensor(const Vector& v) const {
  if (v.isZero(0.0)) {
    throw DomainError("metric_tensor: g_v is undefined at v = 0");
  }
  return std::visit(
      [&](const auto& n) -> MetricTensor {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EuclideanLike>) {
          return n.A;
        } else if constexpr (std::is_same_v<T, Asym1D>) {
          MetricTensor g(1, 1);
          g(0, 0) = v[0] > 0.0 ? n.alpha * n.alpha : n.beta * n.beta;
          return g;
        } else {
          const double h = 1e-4 * eval(v);
          MetricTensor g(dim_, dim_);
          for (int i = 0; i < dim_; ++i) {
            Vector vp = v, vm = v;
            vp[i] += h;
            vm[i] -= h;
            g.col(i) = (half_sq_gradient(vp) - half_sq_gradient(vm)) / (2.0 * h);
          }
          return MetricTensor(0.5 * (g + g.transpose()));
        }
      },
      variant_);
}

MinkowskiNorm MinkowskiNorm::reverse() const {
  return std::visit(
      [&](const auto& n) -> MinkowskiNorm {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EuclideanLike>) {
          return *this;
        } else if constexpr (std::is_same_v<T, Randers>) {
          return MinkowskiNorm::randers(n.A, -n.b);
        } else {
          return MinkowskiNorm::asym1d(n.beta, n.alpha);
        }
      },
      variant_);
}

MetricTensor dual_metric_tensor(const MinkowskiNorm& norm, const Covector& a) {
  return norm.metric_tensor(norm.legendre(a)).inverse();
}

double uniform_smoothness(const MinkowskiNorm& norm, int n_samples) {
  if (n_samples < 2) throw DomainError("uniform_smoothness: need at least 2 samples");
  if (norm.is_euclidean()) return 1.0;
  if (const auto* n = std::get_if<Asym1D>(&norm.variant())) {
    const double r = std::max(n->alpha / n->beta, n->beta / n->alpha);
    return r * r;
  }
  std::vector<Vec> dirs;
  if (norm.dim() == 1) {
    dirs = {Vec::Ones(1), -Vec::Ones(1)};
  } else {
    for (int k = 0; k < n_samples; ++k) {
      dirs.push_back(unit_direction(2.0 * std::numbers::pi * k / n_samples));
    }
  }
  double sup = 1.0;
  for (const auto& v : dirs) {
    const Mat g = norm.metric_tensor(v);
    for (const auto& w : dirs) {
      const double fw = norm.eval(w);
      sup = std::max(sup, w.dot(g * w) / (fw * fw));
    }
  }
  return sup;
}

}  // namespace fg
