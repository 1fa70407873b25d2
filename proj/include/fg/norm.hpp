#pragma once

#include <Eigen/Dense>

#include <variant>

namespace fg {

// Norms live on R^1 or R^2; the fixed maximum keeps per-node algebra off the heap.
inline constexpr int kMaxDim = 2;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Tangent vectors and covectors share a representation; the role is semantic.
using Vector = Vec;
using Covector = Vec;
using MetricTensor = Mat;

struct EuclideanLike {
  Mat A;
};

struct Randers {
  Mat A;
  Vec b;
};

struct Asym1D {
  double alpha;
  double beta;
};

// A strongly convex, positively 1-homogeneous norm on R^n, possibly non-reversible.
//
// Construction validates the variant (A symmetric positive-definite, Randers
// drift strictly inside the admissible ball, Asym1D slopes positive) and
// caches A^{-1} where it is needed.
class MinkowskiNorm {
 public:
  using Variant = std::variant<EuclideanLike, Randers, Asym1D>;

  static MinkowskiNorm euclidean(const Mat& A);
  static MinkowskiNorm randers(const Mat& A, const Vec& b);
  static MinkowskiNorm asym1d(double alpha, double beta);
  static MinkowskiNorm identity(int dim) { return euclidean(Mat::Identity(dim, dim)); }

  int dim() const { return dim_; }
  const Variant& variant() const { return variant_; }
  bool is_euclidean() const { return std::holds_alternative<EuclideanLike>(variant_); }
  bool is_asym1d() const { return std::holds_alternative<Asym1D>(variant_); }
  bool is_randers() const { return std::holds_alternative<Randers>(variant_); }
  // Randers drift size sqrt(b^T A^{-1} b); zero for other variants.
  double randers_drift() const;

  bool operator==(const MinkowskiNorm& other) const;

  // F(v). F(0) = 0.
  double eval(const Vector& v) const;

  // F*(a) = sup{a(v) : F(v) <= 1}. Closed form for EuclideanLike and Asym1D;
  // directional sampling of the unit sphere plus Brent polish for Randers.
  double eval_dual(const Covector& a) const;

  // Legendre transform L*(a): the unique v with F(v) = F*(a), a(v) = F*(a)^2.
  // Throws SolverError when the post-hoc verification fails.
  Vector legendre(const Covector& a) const;

  // g_v = (1/2) Hess(F^2)(v). Throws DomainError on v = 0.
  MetricTensor metric_tensor(const Vector& v) const;

  // v -> F(-v).
  MinkowskiNorm reverse() const;

  // Gradient of F^2/2 at v, i.e. g_v(v, .). Analytic for all variants.
  Covector half_sq_gradient(const Vector& v) const;

 private:
  MinkowskiNorm(int dim, Variant v) : dim_(dim), variant_(std::move(v)) {}

  double randers_dual_numeric(const Covector& a) const;
  Vector randers_legendre(const Covector& a) const;

  int dim_ = 0;
  Variant variant_;
  Mat a_inv_;  // A^{-1} for EuclideanLike / Randers
};

// Supremum of g_v(w,w)/F^2(w) over sampled unit directions v, w.
//
// Exactly 1 for EuclideanLike and max(alpha/beta, beta/alpha)^2 for Asym1D.
// In two dimensions the samples are the n_samples equispaced angles, so
// doubling n_samples refines the sample set and can only increase the value.
double uniform_smoothness(const MinkowskiNorm& norm, int n_samples);

// g*_a, the inverse of g at L*(a). Used by the smoothness duality bound.
MetricTensor dual_metric_tensor(const MinkowskiNorm& norm, const Covector& a);

}  // namespace fg
