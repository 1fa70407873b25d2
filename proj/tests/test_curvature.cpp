#include <doctest.h>

#include "fg/curvature.hpp"
#include "fg/error.hpp"

#include <cmath>
#include <random>

using namespace fg;

namespace {

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

WeightedSpace gauss(const MinkowskiNorm& F, double L, int n = 201) { return build_space(Domain::interval(L, n), F, "x^2/2"); }

}  // namespace

TEST_CASE("ricci_N closed forms") {
  const auto s = gauss(MinkowskiNorm::identity(1), 2.0);
  const RicciField ric(s);
  const std::size_t x1 = 200;  // x = 1
  for (std::size_t i : {std::size_t{0}, std::size_t{57}, x1}) CHECK(ric(i, v1(1.0), kInfiniteN) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ric(x1, v1(1.0), 3.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(ricci_N(s, x1, v1(1.0), 3.0) == doctest::Approx(0.5).epsilon(1e-10));

  const auto flat = build_space(Domain::interval(2.0, 64), MinkowskiNorm::identity(1), "0");
  for (double N : {kInfiniteN, 1.0, 3.0, -2.0}) CHECK(ricci_N(flat, 10, v1(-2.0), N) == 0.0);
}

TEST_CASE("ricci_N errors") {
  const auto s = gauss(MinkowskiNorm::identity(1), 2.0);
  CHECK_THROWS_AS(ricci_N(s, 3, v1(1.0), 0.5), DomainError);
  CHECK_THROWS_AS(ricci_N(s, 3, v1(1.0), 0.0), DomainError);
  CHECK_THROWS_AS(ricci_N(s, 3, v1(0.0), 3.0), DomainError);
  CHECK_THROWS_AS(ricci_N(s, 3, v1(1.0), NAN), DomainError);
  // N = n is the limit and needs DPsi(v) = 0: x = 0 is node 100.
  CHECK(ricci_N(s, 100, v1(1.0), 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ricci_N(s, 3, v1(1.0), 1.0), DomainError);
}

TEST_CASE("effective_K on model spaces") {
  CHECK(effective_K(gauss(MinkowskiNorm::identity(1), 6.0, 256), {kInfiniteN, 8}).K_eff == doctest::Approx(1.0).epsilon(1e-10));
  const auto a = effective_K(gauss(MinkowskiNorm::asym1d(2, 1), 6.0, 256), {kInfiniteN, 8});
  CHECK(a.K_eff == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(a.argmin_direction[0] == doctest::Approx(0.5));

  const auto s = gauss(MinkowskiNorm::identity(1), 2.0);
  const auto r = effective_K(s, {3.0, 8});
  CHECK(r.K_eff == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(s.coord(r.argmin_node, 0)) == doctest::Approx(1.0));
  CHECK(effective_K(s, {10.0, 8}).K_eff == doctest::Approx(1.0 - 1.0 / 9.0).epsilon(1e-10));
  CHECK(effective_K(gauss(MinkowskiNorm::asym1d(2, 1), 2.0), {3.0, 8}).K_eff == doctest::Approx(0.125).epsilon(1e-10));
  CHECK(effective_K(s, {-5.0, 8}).K_eff == doctest::Approx(1.0).epsilon(1e-10));

  // 2D: Psi = (x^2 + y^2)/2 with a Randers norm gives min over unit vectors of |v|^2.
  Vec b(2);
  b << 0.5, 0.0;
  const auto r2 = build_space(Domain::box(2.0, 2.0, 21, 21), MinkowskiNorm::randers(Mat::Identity(2, 2), b), "(x^2+y^2)/2");
  double oracle = kInfiniteN;
  for (int k = 0; k < 64; ++k) {
    const double t = 2 * M_PI * k / 64;
    oracle = std::min(oracle, 1.0 / std::pow(1.0 + 0.5 * std::cos(t), 2));
  }
  CHECK(effective_K(r2, {kInfiniteN, 64}).K_eff == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(oracle == doctest::Approx(1.0 / 2.25));
  CHECK_THROWS_AS(effective_K(r2, {kInfiniteN, 3}), DomainError);
}

TEST_CASE("property: Psi shift, monotonicity in N, quadratic scaling") {
  const auto a = build_space(Domain::box(2.0, 2.0, 17, 17), MinkowskiNorm::identity(2), "x^2+0.3*x*y+sin(y)");
  const auto b = build_space(Domain::box(2.0, 2.0, 17, 17), MinkowskiNorm::identity(2), "x^2+0.3*x*y+sin(y)+7");
  for (double N : {kInfiniteN, 3.0, 4.0, -1.0})
    CHECK(effective_K(a, {N, 16}).K_eff == doctest::Approx(effective_K(b, {N, 16}).K_eff).epsilon(1e-12));

  const RicciField ric(a);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<std::size_t> node(0, a.size() - 1);
  for (int t = 0; t < 200; ++t) {
    Vec v(2);
    v << g(rng), g(rng);
    const auto i = node(rng);
    double prev = -kInfiniteN;
    for (double N : {2.5, 3.0, 5.0, 20.0, kInfiniteN}) {
      const double r = ric(i, v, N);
      CHECK(r >= prev - 1e-12);
      prev = r;
    }
    CHECK(ric(i, v, -3.0) >= ric(i, v, kInfiniteN) - 1e-12);
    for (double c : {0.5, 2.0, 10.0}) CHECK(ric(i, c * v, 4.0) == doctest::Approx(c * c * ric(i, v, 4.0)).epsilon(1e-12));
  }
}
