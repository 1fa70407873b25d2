#pragma once

#include "fg/curvature.hpp"
#include "fg/heatflow.hpp"
#include "fg/norm.hpp"
#include "fg/space.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace fg {

struct SpaceConfig {
  std::string geometry = "interval";  // interval | circle | box | torus
  std::vector<double> length{6.0};
  std::vector<int> nodes{256};
  std::string norm = "euclidean";     // euclidean | randers | asym1d
  std::vector<std::vector<double>> A;  // identity when empty
  std::vector<double> b;
  double alpha = 2.0;
  double beta = 1.0;
  std::string psi = "x^2/2";

  Domain domain() const;
  Domain domain(int nodes_per_axis) const;
  MinkowskiNorm make_norm() const;
  WeightedSpace build() const;
  int dim() const;
};

struct FlowConfig {
  std::string u0 = "1+0.5*x";
  FlowParams params;
};

struct IdentityConfig {
  std::vector<int> resolutions{128, 256};
  std::vector<double> a{0.25, 0.5, 1.0};
  std::vector<std::string> h{"sin(2*pi*x)", "0.3*sin(2*pi*x)", "0.2*sin(2*pi*x)+0.1*cos(4*pi*x)"};
  std::string u0 = "1+0.1*sin(2*pi*x)";
  double t_end = 0.004;      // flow horizon for the energy-rate check
  double tau_factor = 0.25;  // tau = tau_factor * h^2
  double target_order = 1.8;
  double fail_order = 1.5;
};

struct ExperimentConfig {
  SpaceConfig space;
  std::vector<double> N{kInfiniteN};
  std::vector<std::string> checks;  // empty selects every checker
  std::vector<double> sobolev_p{1.0, 1.5, 2.0};
  std::uint64_t seed = 42;
  int bank_count = 20;
  int directions = 64;
  double tol = 2e-2;
  FlowConfig flow;
  IdentityConfig identities;
  std::string out_dir = ".";
};

// Every checker name accepted in "checks".
const std::vector<std::string>& known_checks();

// Throws ConfigError naming the offending key, or the line for syntax errors.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Fully resolved config, defaults filled in.
nlohmann::json to_json(const ExperimentConfig& cfg);

// JSON number for a possibly infinite N: finite values as numbers, else "inf".
nlohmann::json n_to_json(double N);
std::string n_key(double N);

}  // namespace fg
