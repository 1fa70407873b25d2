#include "fg/bank.hpp"

#include "fg/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace fg {

namespace {

using Fn = std::function<double(double, double)>;

struct Named {
  std::string name;
  Fn f;
};

// Members are written in reduced coordinates: s, t in [-1, 1] on no-flux
// axes and angles p, q in [0, 2 pi) on periodic ones.
std::vector<Named> fixed_members(bool periodic, int dim) {
  std::vector<Named> out;
  const double pi = M_PI;
  if (!periodic) {
    out.push_back({"s", [](double s, double) { return s; }});
    out.push_back({"-s", [](double s, double) { return -s; }});
    out.push_back({"s^2", [](double s, double) { return s * s; }});
    out.push_back({"s^3", [](double s, double) { return s * s * s; }});
    out.push_back({"s^4-s^2", [](double s, double) { return s * s * s * s - s * s; }});
    out.push_back({"cos(pi(s+1)/2)", [pi](double s, double) { return std::cos(pi * (s + 1) / 2); }});
    out.push_back({"cos(pi(s+1))", [pi](double s, double) { return std::cos(pi * (s + 1)); }});
    out.push_back({"-cos(3pi(s+1)/2)", [pi](double s, double) { return -std::cos(1.5 * pi * (s + 1)); }});
    out.push_back({"sin(pi s)", [pi](double s, double) { return std::sin(pi * s); }});
    out.push_back({"exp(s)", [](double s, double) { return std::exp(s); }});
    out.push_back({"exp(-2s)", [](double s, double) { return std::exp(-2 * s); }});
    out.push_back({"bump(0.2,0.3)", [](double s, double) { return std::exp(-(s - 0.2) * (s - 0.2) / 0.09); }});
    out.push_back({"-bump(-0.4,0.2)", [](double s, double) { return -std::exp(-(s + 0.4) * (s + 0.4) / 0.04); }});
    out.push_back({"tanh(3s)", [](double s, double) { return std::tanh(3 * s); }});
    if (dim == 2) {
      out.push_back({"t", [](double, double t) { return t; }});
      out.push_back({"s+t", [](double s, double t) { return s + t; }});
      out.push_back({"s*t", [](double s, double t) { return s * t; }});
      out.push_back({"s^2-t^2", [](double s, double t) { return s * s - t * t; }});
    }
  } else {
    out.push_back({"sin(p)", [](double p, double) { return std::sin(p); }});
    out.push_back({"-sin(p)", [](double p, double) { return -std::sin(p); }});
    out.push_back({"cos(p)", [](double p, double) { return std::cos(p); }});
    out.push_back({"sin(2p)", [](double p, double) { return std::sin(2 * p); }});
    out.push_back({"cos(3p)", [](double p, double) { return std::cos(3 * p); }});
    out.push_back({"sin(p)+cos(2p)/2", [](double p, double) { return std::sin(p) + 0.5 * std::cos(2 * p); }});
    out.push_back({"exp(sin(p)/2)", [](double p, double) { return std::exp(0.5 * std::sin(p)); }});
    out.push_back({"exp(-cos(p))", [](double p, double) { return std::exp(-std::cos(p)); }});
    out.push_back({"pbump(1)", [](double p, double) { return std::exp(5 * (std::cos(p - 1) - 1)); }});
    out.push_back({"-pbump(4)", [](double p, double) { return -std::exp(8 * (std::cos(p - 4) - 1)); }});
    out.push_back({"sin(p)^3", [](double p, double) { return std::pow(std::sin(p), 3); }});
    if (dim == 2) {
      out.push_back({"sin(q)", [](double, double q) { return std::sin(q); }});
      out.push_back({"sin(p+q)", [](double p, double q) { return std::sin(p + q); }});
      out.push_back({"cos(p)cos(q)", [](double p, double q) { return std::cos(p) * std::cos(q); }});
      out.push_back({"exp(sin(p)-cos(q))", [](double p, double q) { return std::exp(0.5 * (std::sin(p) - std::cos(q))); }});
    }
  }
  return out;
}

// Low-pass random field: modes k (and l in 2D) up to 4 with amplitudes ~ 1/(k+l)^2.
Named random_member(std::mt19937_64& rng, bool periodic, int dim, int index) {
  std::normal_distribution<double> g;
  struct Mode {
    int k, l;
    double a, b;
  };
  std::vector<Mode> modes;
  for (int k = 0; k <= 4; ++k) {
    for (int l = 0; l <= (dim == 2 ? 4 : 0); ++l) {
      if (k + l == 0) continue;
      const double w = 1.0 / ((k + l) * (k + l));
      modes.push_back({k, l, w * g(rng), w * g(rng)});
    }
  }
  const double pi = M_PI;
  Fn f;
  if (periodic) {
    f = [modes](double p, double q) {
      double acc = 0.0;
      for (const auto& m : modes) acc += m.a * std::cos(m.k * p + m.l * q) + m.b * std::sin(m.k * p + m.l * q);
      return acc;
    };
  } else {
    // Neumann cosines plus a few odd polynomial parts.
    f = [modes, pi](double s, double t) {
      double acc = 0.0;
      for (const auto& m : modes) {
        acc += m.a * std::cos(m.k * pi * (s + 1) / 2) * std::cos(m.l * pi * (t + 1) / 2);
        acc += 0.25 * m.b * std::pow(s, m.k) * std::pow(t, m.l);
      }
      return acc;
    };
  }
  return {"random" + std::to_string(index), f};
}

}  // namespace

TestBank::TestBank(const WeightedSpace& space, std::uint64_t seed, std::size_t count) {
  const auto& d = space.domain();
  const bool periodic = d.periodic();
  const int dim = d.dim();
  auto reduced = [&](std::size_t i, int axis) {
    if (axis >= dim) return 0.0;
    const double x = space.coord(i, axis);
    if (periodic) return 2.0 * M_PI * (x - d.origin(axis)) / d.length[axis];
    return 2.0 * (x - d.origin(axis)) / d.length[axis] - 1.0;
  };
  std::vector<Named> gens = fixed_members(periodic, dim);
  std::mt19937_64 rng(seed);
  int r = 0;
  while (gens.size() < count) gens.push_back(random_member(rng, periodic, dim, r++));
  gens.resize(count);
  for (auto& g : gens) {
    ScalarField f(space.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = g.f(reduced(i, 0), reduced(i, 1));
    for (double v : f) {
      if (!std::isfinite(v)) throw DomainError("bank: member " + g.name + " is not finite");
    }
    members_.push_back({g.name, std::move(f)});
  }
}

std::vector<TestBank::Member> TestBank::positive() const {
  std::vector<Member> out;
  for (const auto& m : members_) {
    double mean = 0.0;
    for (double v : m.f) mean += v / static_cast<double>(m.f.size());
    double dev = 0.0;
    for (double v : m.f) dev = std::max(dev, std::abs(v - mean));
    ScalarField p(m.f.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = dev > 0.0 ? std::exp((m.f[i] - mean) / dev) : 1.0;
    out.push_back({"exp(" + m.name + ")", std::move(p)});
  }
  return out;
}

}  // namespace fg
