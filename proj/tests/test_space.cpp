#include <doctest.h>

#include "fg/error.hpp"
#include "fg/space.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace fg;

namespace {

// Composite Simpson rule on [a, b] with n (even) panels.
template <class Fn>
double simpson(Fn f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(Domain::interval(1.0, 7).validate(), DomainError);
  CHECK_THROWS_AS(Domain::circle(0.0, 16).validate(), DomainError);
  CHECK_THROWS_AS(Domain::box(1.0, 1.0, 16, 4).validate(), DomainError);
  CHECK_NOTHROW(Domain::torus(1.0, 2.0, 8, 8).validate());
  CHECK(Domain::interval(6.0, 256).spacing(0) == doctest::Approx(6.0 / 255));
  CHECK(Domain::circle(1.0, 128).spacing(0) == doctest::Approx(1.0 / 128));
}

TEST_CASE("build_space normalizes the measure") {
  const auto g = build_space(Domain::interval(6.0, 256), MinkowskiNorm::identity(1), "x^2/2");
  const auto& m = g.cell_mass();
  CHECK(std::accumulate(m.begin(), m.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double w : m) CHECK(w > 0.0);

  const auto c = build_space(Domain::circle(1.0, 128), MinkowskiNorm::identity(1), "0");
  for (double w : c.cell_mass()) CHECK(w == doctest::Approx(1.0 / 128));

  const auto t = build_space(Domain::torus(1.0, 1.0, 64, 64), MinkowskiNorm::identity(2), "0.1*sin(2*pi*x)*cos(2*pi*y)");
  CHECK(t.size() == 64u * 64u);
  CHECK(integrate(t, ScalarField(t.size(), 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("build_space errors") {
  CHECK_THROWS_AS(build_space(Domain::interval(6.0, 64), MinkowskiNorm::identity(1), "log(x)"), DomainError);
  CHECK_THROWS_AS(build_space(Domain::interval(6.0, 64), MinkowskiNorm::identity(2), "0"), DomainError);
  CHECK_THROWS_AS(build_space(Domain::interval(6.0, 64), MinkowskiNorm::identity(1), "x^"), ConfigError);
}

TEST_CASE("integrate") {
  const auto g = build_space(Domain::interval(6.0, 256), MinkowskiNorm::identity(1), "x^2/2");
  CHECK(std::abs(integrate(g, g.sample("x"))) < 1e-10);

  auto w = [](double x) { return std::exp(-x * x / 2); };
  const double oracle = simpson([&](double x) { return x * x * w(x); }, -3, 3, 2560) / simpson(w, -3, 3, 2560);
  CHECK(integrate(g, g.sample("x^2")) == doctest::Approx(oracle).epsilon(1e-4));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  ScalarField f(g.size()), h(g.size()), s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    f[i] = u(rng);
    h[i] = u(rng);
    s[i] = 2 * f[i] - 3 * h[i];
  }
  CHECK(integrate(g, s) == doctest::Approx(2 * integrate(g, f) - 3 * integrate(g, h)).epsilon(1e-12));
  for (auto& x : f) x = std::abs(x);
  CHECK(integrate(g, f) >= 0.0);
}

TEST_CASE("measure is invariant under Psi shifts") {
  const auto a = build_space(Domain::box(2.0, 3.0, 16, 20), MinkowskiNorm::identity(2), "x^2+y");
  const auto b = build_space(Domain::box(2.0, 3.0, 16, 20), MinkowskiNorm::identity(2), "x^2+y+40");
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.cell_mass()[i] == doctest::Approx(b.cell_mass()[i]).epsilon(1e-13));
}

TEST_CASE("asymmetric distance") {
  const auto g = build_space(Domain::interval(2.0, 21), MinkowskiNorm::asym1d(2.0, 1.0), "0");
  const std::size_t zero = 10, one = 20;  // x = 0 and x = 1
  CHECK(asym_distance(g, zero, one) == doctest::Approx(2.0));
  CHECK(asym_distance(g, one, zero) == doctest::Approx(1.0));
  CHECK(asym_distance(g, 5, 5) == 0.0);

  const auto c = build_space(Domain::circle(1.0, 16), MinkowskiNorm::identity(1), "0");
  CHECK(asym_distance(c, 0, 12) == doctest::Approx(0.25));

  Vec b(2);
  b << 0.4, -0.3;
  const auto t = build_space(Domain::torus(1.0, 1.0, 12, 12), MinkowskiNorm::randers(Mat::Identity(2, 2), b), "0");
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, t.size() - 1);
  for (int k = 0; k < 300; ++k) {
    const auto x = pick(rng), y = pick(rng), z = pick(rng);
    CHECK(asym_distance(t, x, z) <= asym_distance(t, x, y) + asym_distance(t, y, z) + 1e-12);
  }
}

TEST_CASE("probability vectors") {
  const ProbabilityVector p({1.0, 3.0});
  CHECK(p[0] == doctest::Approx(0.25));
  CHECK_THROWS_AS(ProbabilityVector({1.0, -1.0}), DomainError);
  CHECK_THROWS_AS(ProbabilityVector({0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(ProbabilityVector({NAN, 1.0}), DomainError);
}
