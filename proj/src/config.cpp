#include "fg/config.hpp"

#include "fg/error.hpp"
#include "fg/expr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where.empty() ? "<root>" : where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) fail(where.empty() ? k : where + "." + k, "unknown key");
  }
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

// N accepts numbers and the strings "inf" / "infinity".
double as_N(const json& v, const std::string& key) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInfiniteN;
    fail(key, "expected a number or \"inf\"");
  }
  return as_number(v, key);
}

template <class T, class Fn>
std::vector<T> as_list(const json& v, const std::string& key, Fn&& item) {
  std::vector<T> out;
  if (!v.is_array()) {
    out.push_back(item(v, key));
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(item(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

template <class T>
void read(const json& obj, const std::string& where, const char* key, T& dst) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  const auto k = join(where, key);
  if constexpr (std::is_same_v<T, double>) {
    dst = as_number(v, k);
  } else if constexpr (std::is_same_v<T, int>) {
    dst = as_int(v, k);
  } else if constexpr (std::is_same_v<T, std::string>) {
    dst = as_string(v, k);
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    dst = as_list<double>(v, k, as_number);
  } else if constexpr (std::is_same_v<T, std::vector<int>>) {
    dst = as_list<int>(v, k, as_int);
  } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
    dst = as_list<std::string>(v, k, as_string);
  }
}

void parse_space(const json& j, SpaceConfig& s) {
  reject_unknown(j, "space", {"domain", "norm", "psi"});
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    reject_unknown(d, "space.domain", {"type", "length", "nodes"});
    read(d, "space.domain", "type", s.geometry);
    read(d, "space.domain", "length", s.length);
    read(d, "space.domain", "nodes", s.nodes);
  }
  if (j.contains("norm")) {
    const auto& n = j.at("norm");
    reject_unknown(n, "space.norm", {"type", "A", "b", "alpha", "beta"});
    read(n, "space.norm", "type", s.norm);
    if (n.contains("A")) {
      const auto& A = n.at("A");
      if (!A.is_array()) fail("space.norm.A", "expected a matrix");
      s.A.clear();
      for (std::size_t r = 0; r < A.size(); ++r) {
        const auto key = "space.norm.A[" + std::to_string(r) + "]";
        if (!A[r].is_array()) fail(key, "expected a row");
        s.A.push_back(as_list<double>(A[r], key, as_number));
      }
    }
    read(n, "space.norm", "b", s.b);
    read(n, "space.norm", "alpha", s.alpha);
    read(n, "space.norm", "beta", s.beta);
  }
  read(j, "space", "psi", s.psi);

  static const std::set<std::string> geometries{"interval", "circle", "box", "torus"};
  if (!geometries.count(s.geometry)) fail("space.domain.type", "unknown geometry '" + s.geometry + "'");
  const std::size_t dim = s.dim();
  if (s.length.size() != dim) fail("space.domain.length", "expected " + std::to_string(dim) + " value(s)");
  if (s.nodes.size() != dim) fail("space.domain.nodes", "expected " + std::to_string(dim) + " value(s)");
  for (double L : s.length)
    if (!(L > 0.0) || !std::isfinite(L)) fail("space.domain.length", "must be positive");
  for (int n : s.nodes)
    if (n < 8) fail("space.domain.nodes", "need at least 8 nodes per axis");
  if (s.norm != "euclidean" && s.norm != "randers" && s.norm != "asym1d")
    fail("space.norm.type", "unknown norm '" + s.norm + "'");
  if (s.norm == "asym1d" && dim != 1) fail("space.norm.type", "asym1d needs a 1D domain");
  if (!s.A.empty()) {
    if (s.A.size() != dim) fail("space.norm.A", "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    for (const auto& row : s.A)
      if (row.size() != dim) fail("space.norm.A", "expected a square matrix");
  }
  if (s.norm == "randers" && s.b.size() != dim) fail("space.norm.b", "expected " + std::to_string(dim) + " value(s)");
}

void parse_flow(const json& j, FlowConfig& f) {
  reject_unknown(j, "flow", {"u0", "tau", "t_end", "tol", "max_iter", "stride"});
  read(j, "flow", "u0", f.u0);
  read(j, "flow", "tau", f.params.tau);
  read(j, "flow", "t_end", f.params.t_end);
  read(j, "flow", "tol", f.params.tol);
  read(j, "flow", "max_iter", f.params.max_iter);
  read(j, "flow", "stride", f.params.stride);
  if (!(f.params.tau > 0.0)) fail("flow.tau", "must be positive");
  if (!(f.params.t_end > 0.0)) fail("flow.t_end", "must be positive");
  if (!(f.params.tol > 0.0)) fail("flow.tol", "must be positive");
  if (f.params.max_iter < 1) fail("flow.max_iter", "must be at least 1");
  if (f.params.stride < 1) fail("flow.stride", "must be at least 1");
}

void parse_identities(const json& j, IdentityConfig& c) {
  reject_unknown(j, "identities", {"resolutions", "a", "h", "u0", "t_end", "tau_factor", "target_order", "fail_order"});
  read(j, "identities", "resolutions", c.resolutions);
  read(j, "identities", "a", c.a);
  read(j, "identities", "h", c.h);
  read(j, "identities", "u0", c.u0);
  read(j, "identities", "t_end", c.t_end);
  read(j, "identities", "tau_factor", c.tau_factor);
  read(j, "identities", "target_order", c.target_order);
  read(j, "identities", "fail_order", c.fail_order);
  if (c.resolutions.size() != 2 || c.resolutions[0] < 8 || c.resolutions[1] != 2 * c.resolutions[0])
    fail("identities.resolutions", "expected [n, 2n] with n >= 8");
  if (!(c.t_end > 0.0)) fail("identities.t_end", "must be positive");
  if (!(c.tau_factor > 0.0)) fail("identities.tau_factor", "must be positive");
}

void check_expression(const std::string& key, const std::string& source) {
  try {
    Expression e(source);
  } catch (const ConfigError& err) {
    fail(key, err.what());
  }
}

}  // namespace

int SpaceConfig::dim() const { return geometry == "box" || geometry == "torus" ? 2 : 1; }

Domain SpaceConfig::domain() const {
  if (geometry == "interval") return Domain::interval(length[0], nodes[0]);
  if (geometry == "circle") return Domain::circle(length[0], nodes[0]);
  if (geometry == "box") return Domain::box(length[0], length[1], nodes[0], nodes[1]);
  return Domain::torus(length[0], length[1], nodes[0], nodes[1]);
}

Domain SpaceConfig::domain(int n) const {
  SpaceConfig c = *this;
  std::fill(c.nodes.begin(), c.nodes.end(), n);
  return c.domain();
}

MinkowskiNorm SpaceConfig::make_norm() const {
  const int d = dim();
  if (norm == "asym1d") return MinkowskiNorm::asym1d(alpha, beta);
  Mat M = Mat::Identity(d, d);
  for (std::size_t r = 0; r < A.size(); ++r)
    for (std::size_t c = 0; c < A[r].size(); ++c) M(r, c) = A[r][c];
  if (norm == "euclidean") return MinkowskiNorm::euclidean(M);
  Vec v(d);
  for (int k = 0; k < d; ++k) v[k] = b[k];
  return MinkowskiNorm::randers(M, v);
}

WeightedSpace SpaceConfig::build() const { return build_space(domain(), make_norm(), psi); }

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"bochner",      "bochner_pointwise", "poincare",         "logsobolev",
                                              "gamma2_integral", "talagrand",       "entropy_energy",   "nash",
                                              "nonsharp_sobolev", "sobolev",        "sobolev_inf"};
  return names;
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c;
  reject_unknown(doc, "", {"space", "N", "checks", "sobolev_p", "bank", "curvature", "tolerance", "flow", "identities",
                           "output"});
  if (!doc.contains("space")) fail("space", "required");
  parse_space(doc.at("space"), c.space);
  if (doc.contains("N")) c.N = as_list<double>(doc.at("N"), "N", as_N);
  if (c.N.empty()) fail("N", "must not be empty");
  for (std::size_t i = 0; i < c.N.size(); ++i) {
    try {
      validate_N(c.N[i], c.space.dim());
    } catch (const DomainError& e) {
      fail("N[" + std::to_string(i) + "]", e.what());
    }
  }
  read(doc, "", "checks", c.checks);
  for (std::size_t i = 0; i < c.checks.size(); ++i) {
    const auto& k = known_checks();
    if (std::find(k.begin(), k.end(), c.checks[i]) == k.end())
      fail("checks[" + std::to_string(i) + "]", "unknown checker '" + c.checks[i] + "'");
  }
  read(doc, "", "sobolev_p", c.sobolev_p);
  if (doc.contains("bank")) {
    const auto& b = doc.at("bank");
    reject_unknown(b, "bank", {"seed", "count"});
    if (b.contains("seed")) {
      const auto& v = b.at("seed");
      if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        fail("bank.seed", "expected a nonnegative integer");
      c.seed = b.at("seed").get<std::uint64_t>();
    }
    read(b, "bank", "count", c.bank_count);
    if (c.bank_count < 1) fail("bank.count", "must be at least 1");
  }
  if (doc.contains("curvature")) {
    reject_unknown(doc.at("curvature"), "curvature", {"directions"});
    read(doc.at("curvature"), "curvature", "directions", c.directions);
  }
  if (doc.contains("tolerance")) {
    reject_unknown(doc.at("tolerance"), "tolerance", {"sweep"});
    read(doc.at("tolerance"), "tolerance", "sweep", c.tol);
    if (!(c.tol >= 0.0)) fail("tolerance.sweep", "must be nonnegative");
  }
  if (doc.contains("flow")) parse_flow(doc.at("flow"), c.flow);
  if (doc.contains("identities")) parse_identities(doc.at("identities"), c.identities);
  check_expression("space.psi", c.space.psi);
  check_expression("flow.u0", c.flow.u0);
  check_expression("identities.u0", c.identities.u0);
  for (std::size_t i = 0; i < c.identities.h.size(); ++i)
    check_expression("identities.h[" + std::to_string(i) + "]", c.identities.h[i]);
  if (doc.contains("output")) {
    reject_unknown(doc.at("output"), "output", {"dir"});
    read(doc.at("output"), "output", "dir", c.out_dir);
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
    const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
    throw ConfigError("line " + std::to_string(line) + ": " + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json n_to_json(double N) {
  if (std::isinf(N)) return N > 0 ? "inf" : "-inf";
  return N;
}

std::string n_key(double N) {
  if (std::isinf(N)) return N > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss.precision(17);
  ss << N;
  return ss.str();
}

json to_json(const ExperimentConfig& c) {
  json A = json::array();
  for (const auto& row : c.space.A) A.push_back(row);
  json norm{{"type", c.space.norm}};
  if (c.space.norm == "asym1d") {
    norm["alpha"] = c.space.alpha;
    norm["beta"] = c.space.beta;
  } else {
    norm["A"] = A;
    if (c.space.norm == "randers") norm["b"] = c.space.b;
  }
  json Ns = json::array();
  for (double N : c.N) Ns.push_back(n_to_json(N));
  const auto& f = c.flow.params;
  const auto& id = c.identities;
  return json{
      {"space",
       {{"domain", {{"type", c.space.geometry}, {"length", c.space.length}, {"nodes", c.space.nodes}}},
        {"norm", norm},
        {"psi", c.space.psi}}},
      {"N", Ns},
      {"checks", c.checks.empty() ? known_checks() : c.checks},
      {"sobolev_p", c.sobolev_p},
      {"bank", {{"seed", c.seed}, {"count", c.bank_count}}},
      {"curvature", {{"directions", c.directions}}},
      {"tolerance", {{"sweep", c.tol}}},
      {"flow",
       {{"u0", c.flow.u0}, {"tau", f.tau}, {"t_end", f.t_end}, {"tol", f.tol}, {"max_iter", f.max_iter},
        {"stride", f.stride}}},
      {"identities",
       {{"resolutions", id.resolutions}, {"a", id.a}, {"h", id.h}, {"u0", id.u0}, {"t_end", id.t_end},
        {"tau_factor", id.tau_factor}, {"target_order", id.target_order}, {"fail_order", id.fail_order}}},
      {"output", {{"dir", c.out_dir}}}};
}

}  // namespace fg
