#include <doctest.h>

#include "fg/error.hpp"
#include "fg/norm.hpp"

#include <cmath>
#include <random>
#include <vector>

using fg::Mat;
using fg::MinkowskiNorm;
using fg::Vec;

namespace {

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::vector<MinkowskiNorm> sample_norms() {
  Mat A(2, 2);
  A << 2.0, 0.3, 0.3, 1.0;
  return {MinkowskiNorm::identity(2), MinkowskiNorm::euclidean(A), MinkowskiNorm::randers(Mat::Identity(2, 2), v2(0.5, 0.0)),
          MinkowskiNorm::randers(A, v2(-0.4, 0.6)), MinkowskiNorm::asym1d(2.0, 1.0), MinkowskiNorm::asym1d(0.5, 3.0)};
}

Vec random_vec(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Vec v(dim);
  for (int k = 0; k < dim; ++k) v[k] = g(rng);
  return v;
}

// Hessian of F^2/2 from five-point differences of eval alone.
Mat fd_metric(const MinkowskiNorm& F, const Vec& v) {
  const int d = F.dim();
  const double h = 1e-3 * F.eval(v);
  auto q = [&](const Vec& x) { return 0.5 * F.eval(x) * F.eval(x); };
  Mat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Vec ei = Vec::Zero(d), ej = Vec::Zero(d);
      ei[i] = h;
      ej[j] = h;
      g(i, j) = (q(v + ei + ej) - q(v + ei - ej) - q(v - ei + ej) + q(v - ei - ej)) / (4 * h * h);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("eval on closed-form examples") {
  CHECK(MinkowskiNorm::identity(2).eval(v2(3, 4)) == doctest::Approx(5.0));
  const auto asym = MinkowskiNorm::asym1d(2.0, 1.0);
  CHECK(asym.eval(v1(0.7)) == doctest::Approx(1.4));
  CHECK(asym.eval(v1(-3.0)) == doctest::Approx(3.0));
  const auto r = MinkowskiNorm::randers(Mat::Identity(2, 2), v2(0.5, 0.0));
  CHECK(r.eval(v2(1, 0)) == doctest::Approx(1.5));
  CHECK(r.eval(v2(-1, 0)) == doctest::Approx(0.5));
}

TEST_CASE("dual norm") {
  CHECK(MinkowskiNorm::identity(2).eval_dual(v2(3, 4)) == doctest::Approx(5.0));
  const auto asym = MinkowskiNorm::asym1d(2.0, 1.0);
  CHECK(asym.eval_dual(v1(1.0)) == doctest::Approx(0.5));
  CHECK(asym.eval_dual(v1(-3.0)) == doctest::Approx(3.0));
  for (const auto& F : sample_norms()) CHECK(F.eval_dual(Vec::Zero(F.dim())) == 0.0);

  // Support function of the unit ball by brute force over a fine angular grid.
  const auto r = MinkowskiNorm::randers(Mat::Identity(2, 2), v2(0.5, 0.0));
  const Vec a = v2(0.3, -1.1);
  double best = 0.0;
  for (int k = 0; k < 200000; ++k) {
    const double t = 2 * M_PI * k / 200000.0;
    const Vec u = v2(std::cos(t), std::sin(t));
    best = std::max(best, a.dot(u) / r.eval(u));
  }
  CHECK(r.eval_dual(a) == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("Legendre transform") {
  CHECK((MinkowskiNorm::identity(2).legendre(v2(3, 4)) - v2(3, 4)).norm() < 1e-14);
  const auto asym = MinkowskiNorm::asym1d(2.0, 1.0);
  CHECK(asym.legendre(v1(1.0))[0] == doctest::Approx(0.25));
  CHECK(asym.legendre(v1(-3.0))[0] == doctest::Approx(-3.0));
  for (const auto& F : sample_norms()) CHECK(F.legendre(Vec::Zero(F.dim())).norm() == 0.0);
}

TEST_CASE("metric tensor") {
  Mat A(2, 2);
  A << 2.0, 0.3, 0.3, 1.0;
  CHECK((MinkowskiNorm::euclidean(A).metric_tensor(v2(0.2, -1)) - A).norm() < 1e-14);
  const auto asym = MinkowskiNorm::asym1d(2.0, 1.0);
  CHECK(asym.metric_tensor(v1(0.7))(0, 0) == doctest::Approx(4.0));
  CHECK(asym.metric_tensor(v1(-0.2))(0, 0) == doctest::Approx(1.0));
  const auto r = MinkowskiNorm::randers(Mat::Identity(2, 2), v2(0.5, 0.0));
  const Vec v = v2(1, 0);
  CHECK(v.dot(r.metric_tensor(v) * v) == doctest::Approx(2.25).epsilon(1e-8));
  CHECK_THROWS_AS(r.metric_tensor(Vec::Zero(2)), fg::DomainError);

  const Vec w = v2(0.4, -0.9);
  CHECK((r.metric_tensor(w) - fd_metric(r, w)).norm() < 1e-5);
}

TEST_CASE("uniform smoothness") {
  Mat A(2, 2);
  A << 2.0, 0.3, 0.3, 1.0;
  CHECK(fg::uniform_smoothness(MinkowskiNorm::euclidean(A), 64) == 1.0);
  CHECK(fg::uniform_smoothness(MinkowskiNorm::asym1d(2.0, 1.0), 2) == doctest::Approx(4.0));
  CHECK(fg::uniform_smoothness(MinkowskiNorm::asym1d(1.0, 3.0), 2) == doctest::Approx(9.0));
  CHECK_THROWS_AS(fg::uniform_smoothness(MinkowskiNorm::identity(2), 1), fg::DomainError);

  const auto r = MinkowskiNorm::randers(Mat::Identity(2, 2), v2(0.5, 0.0));
  double prev = 0.0;
  for (int n : {16, 32, 64, 128, 256}) {
    const double s = fg::uniform_smoothness(r, n);
    CHECK(s > 1.0);
    CHECK(s >= prev);
    prev = s;
  }

  // Independent estimate from difference quotients of eval over the same angles.
  const int n = 128;
  double oracle = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ti = 2 * M_PI * i / n;
    const Vec v = v2(std::cos(ti), std::sin(ti));
    const Mat g = fd_metric(r, v);
    for (int j = 0; j < n; ++j) {
      const double tj = 2 * M_PI * j / n;
      const Vec w = v2(std::cos(tj), std::sin(tj));
      oracle = std::max(oracle, w.dot(g * w) / std::pow(r.eval(w), 2));
    }
  }
  CHECK(fg::uniform_smoothness(r, n) == doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("reverse") {
  const auto asym = MinkowskiNorm::asym1d(2.0, 1.0);
  CHECK(asym.reverse() == MinkowskiNorm::asym1d(1.0, 2.0));
  Mat A(2, 2);
  A << 2.0, 0.3, 0.3, 1.0;
  CHECK(MinkowskiNorm::euclidean(A).reverse() == MinkowskiNorm::euclidean(A));
  const auto r = MinkowskiNorm::randers(A, v2(-0.4, 0.6));
  CHECK(r.reverse().reverse() == r);
  CHECK(r.reverse().eval(v2(1, 2)) == doctest::Approx(r.eval(v2(-1, -2))));
}

TEST_CASE("construction rejects invalid data") {
  Mat bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(MinkowskiNorm::euclidean(bad), fg::DomainError);
  CHECK_THROWS_AS(MinkowskiNorm::randers(Mat::Identity(2, 2), v2(0.995, 0.0)), fg::DomainError);
  CHECK_THROWS_AS(MinkowskiNorm::asym1d(0.0, 1.0), fg::DomainError);
  CHECK_NOTHROW(MinkowskiNorm::randers(Mat::Identity(2, 2), v2(0.98, 0.0)));
}

TEST_CASE("property: duality, Legendre consistency, homogeneity, g_v(v,v) = F^2") {
  std::mt19937_64 rng(7);
  for (const auto& F : sample_norms()) {
    const int d = F.dim();
    for (int trial = 0; trial < 50; ++trial) {
      const Vec a = random_vec(rng, d);
      const Vec v = random_vec(rng, d);
      CHECK(a.dot(v) <= F.eval_dual(a) * F.eval(v) * (1 + 1e-12));

      const Vec L = F.legendre(a);
      const double fs = F.eval_dual(a);
      CHECK(std::abs(F.eval(L) - fs) <= 1e-8 * fs);
      CHECK(std::abs(a.dot(L) - fs * fs) <= 1e-8 * fs * fs);

      for (double c : {0.5, 2.0, 10.0}) {
        CHECK(F.eval(c * v) == doctest::Approx(c * F.eval(v)).epsilon(1e-12));
        CHECK(F.eval_dual(c * a) == doctest::Approx(c * fs).epsilon(1e-9));
        CHECK((F.legendre(c * a) - c * L).norm() <= 1e-8 * c * L.norm());
      }

      const Mat g = F.metric_tensor(v);
      CHECK(v.dot(g * v) == doctest::Approx(std::pow(F.eval(v), 2)).epsilon(1e-8));
    }
  }
}

TEST_CASE("property: smoothness duality bound") {
  std::mt19937_64 rng(11);
  for (const auto& F : sample_norms()) {
    const double S = fg::uniform_smoothness(F, 256);
    for (int trial = 0; trial < 50; ++trial) {
      const Vec a = random_vec(rng, F.dim());
      const Vec b = random_vec(rng, F.dim());
      const Mat gs = fg::dual_metric_tensor(F, a);
      CHECK(std::pow(F.eval_dual(b), 2) <= S * b.dot(gs * b) * (1 + 1e-3));
    }
  }
}
