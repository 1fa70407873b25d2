#include <doctest.h>

#include "fg/curvature.hpp"
#include "fg/error.hpp"
#include "fg/heatflow.hpp"

#include <cmath>
#include <sstream>

using namespace fg;

namespace {

WeightedSpace gauss(const MinkowskiNorm& F, double L, int n = 256) { return build_space(Domain::interval(L, n), F, "x^2/2"); }

}  // namespace

TEST_CASE("step fixed point and mass") {
  const DiffOperators ops(gauss(MinkowskiNorm::asym1d(2, 1), 6.0));
  const ScalarField c(256, 1.7);
  CHECK(step(ops, c, 1e-2) == c);
  const auto u = ops.space().sample("1+0.3*sin(2*x)");
  const auto v = step(ops, u, 1e-2);
  CHECK(integrate(ops.space(), v) == doctest::Approx(integrate(ops.space(), u)).epsilon(1e-12));
  CHECK(ops.energy(v) < ops.energy(u));
  CHECK_THROWS_AS(step(ops, u, 0.0), DomainError);
  CHECK_THROWS_AS(step(ops, u, 1e-2, 1e-10, 0), SolverError);
}

TEST_CASE("linear flow matches the Fourier mode") {
  const DiffOperators ops(build_space(Domain::circle(1.0, 128), MinkowskiNorm::identity(1), "0"));
  const auto s = evolve(ops, ops.space().sample("1+0.1*cos(2*pi*x)"), {1e-4, 0.01, 1e-10, 50, 1});
  const double amp = 0.1 * std::exp(-4 * M_PI * M_PI * 0.01);
  CHECK(s.states.back().u[0] - 1.0 == doctest::Approx(amp).epsilon(0.01));
  CHECK(s.states.back().t == doctest::Approx(0.01));

  const auto r = decay_rates(s);
  CHECK(r.variance_rate == doctest::Approx(2 * std::pow(2 * M_PI, 2)).epsilon(0.02));
}

TEST_CASE("constant datum is frozen") {
  const DiffOperators ops(gauss(MinkowskiNorm::identity(1), 6.0));
  const auto s = evolve(ops, ScalarField(256, 1.0), {1e-2, 0.2, 1e-10, 50, 1});
  for (const auto& st : s.states) {
    CHECK(st.energy == 0.0);
    CHECK(st.variance == doctest::Approx(0.0).epsilon(1e-30));
  }
  const auto r = decay_rates(s);
  CHECK(std::isinf(r.variance_rate));
  CHECK(std::isinf(r.entropy_rate));
  CHECK(check_dEdt_identity(ops, s).residual == 0.0);
}

TEST_CASE("monotonicity, mass and comparison along the flow") {
  for (const auto& F : {MinkowskiNorm::identity(1), MinkowskiNorm::asym1d(2, 1)}) {
    const DiffOperators ops(gauss(F, 6.0, 128));
    const auto u0 = ops.space().sample("1+0.2*sin(2*x)+0.1*x");
    const auto s = evolve(ops, u0, {5e-3, 1.0, 1e-10, 50, 1});
    for (std::size_t k = 1; k < s.states.size(); ++k) {
      CHECK(s.states[k].variance <= s.states[k - 1].variance);
      CHECK(s.states[k].energy <= s.states[k - 1].energy);
      CHECK(std::abs(s.states[k].mass - s.states[0].mass) <= 1e-12);
    }
    CHECK(s.min_u >= s.states[0].min_u - 1e-8);
    CHECK(s.max_u <= s.states[0].max_u + 1e-8);
  }
}

TEST_CASE("ergodicity on a positively curved space") {
  const DiffOperators ops(gauss(MinkowskiNorm::asym1d(2, 1), 2.0, 64));
  const auto s = evolve(ops, ops.space().sample("1+0.2*x"), {2e-2, 30.0, 1e-10, 50, 10});
  CHECK(std::sqrt(s.states.back().variance) < 1e-6);
  CHECK(s.states.back().energy < 1e-12);
}

TEST_CASE("decay rates respect the curvature bound") {
  struct Case {
    MinkowskiNorm F;
    double L, N;
  };
  for (const auto& c : {Case{MinkowskiNorm::identity(1), 6.0, kInfiniteN}, Case{MinkowskiNorm::asym1d(2, 1), 6.0, kInfiniteN},
                        Case{MinkowskiNorm::identity(1), 2.0, 3.0}, Case{MinkowskiNorm::asym1d(2, 1), 2.0, 3.0}}) {
    const auto sp = gauss(c.F, c.L, 128);
    const double K = effective_K(sp, {c.N, 8}).K_eff;
    const double bound = std::isinf(c.N) ? 2 * K : 2 * K * c.N / (c.N - 1);
    const DiffOperators ops(sp);
    const auto s = evolve(ops, sp.sample("exp(0.3*x)"), {2e-3, 4.0, 1e-10, 50, 10});
    const auto r = decay_rates(s);
    CHECK(r.variance_rate >= 0.95 * bound);
    CHECK(r.entropy_rate >= 0.95 * bound);
  }
}

TEST_CASE("energy-rate identity converges") {
  double prev = 0.0;
  for (int n : {64, 128}) {
    const double h = 1.0 / n;
    const DiffOperators ops(build_space(Domain::circle(1.0, n), MinkowskiNorm::identity(1), "0"));
    const auto s = evolve(ops, ops.space().sample("1+0.1*cos(2*pi*x)"), {h * h / 4, 0.004, 1e-12, 50, 1});
    const double r = check_dEdt_identity(ops, s, 0.002).residual;
    if (prev > 0.0) CHECK(convergence_order(prev, r) > 1.8);
    prev = r;
  }
}

TEST_CASE("rate fitting and csv") {
  std::vector<double> t, y;
  for (int i = 0; i < 20; ++i) {
    t.push_back(0.1 * i);
    y.push_back(3.0 * std::exp(-1.7 * t.back()));
  }
  CHECK(tail_rate(t, y) == doctest::Approx(1.7).epsilon(1e-12));
  CHECK_THROWS_AS(tail_rate({0, 1, 2}, {1, 1, 1}), DomainError);

  FlowSeries s;
  FlowState st;
  st.t = 0.1;
  st.energy = 1.0 / 3.0;
  s.states.push_back(st);
  std::ostringstream os;
  write_csv(os, s);
  CHECK(os.str() == "t,energy,variance,entropy,fisher\n0.10000000000000001,0.33333333333333331,0,0,0\n");
}
