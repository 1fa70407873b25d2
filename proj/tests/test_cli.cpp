#include <doctest.h>

#include "fg/commands.hpp"
#include "fg/config.hpp"
#include "fg/error.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace fg;
using nlohmann::json;

namespace {

json gaussian(const std::string& norm, int nodes = 128) {
  json n{{"type", norm}};
  if (norm == "asym1d") n = {{"type", "asym1d"}, {"alpha", 2}, {"beta", 1}};
  return {{"space", {{"domain", {{"type", "interval"}, {"length", 6}, {"nodes", nodes}}}, {"norm", n}, {"psi", "x^2/2"}}}};
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "fg_test_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(FG_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_config(const std::string& name, const json& doc) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << doc.dump(2);
  return path.string();
}

}  // namespace

TEST_CASE("config defaults and round trip") {
  const auto cfg = parse_config(gaussian("euclidean"));
  CHECK(cfg.N.size() == 1);
  CHECK(std::isinf(cfg.N[0]));
  CHECK(cfg.seed == 42);
  CHECK(cfg.bank_count == 20);
  const auto resolved = to_json(cfg);
  CHECK(to_json(parse_config(resolved)) == resolved);
  CHECK(resolved["N"][0] == "inf");
  CHECK(resolved["checks"].size() == known_checks().size());
}

TEST_CASE("config diagnostics name the key or line") {
  CHECK(contains(config_error(R"({"space": {"domain": {"type": "interval", "length": 6, "nodes": 64}}, "extra": 1})"),
                 "extra: unknown key"));
  CHECK(contains(config_error(R"({"space": {"norm": {"type": "euclidean", "gamma": 1}}})"), "space.norm.gamma"));
  CHECK(contains(config_error(R"({"space": {}, "N": [3, 0.5]})"), "N[1]"));
  CHECK(contains(config_error(R"({"space": {}, "N": ["-inf"]})"), "N[0]"));
  CHECK(contains(config_error(R"({"space": {}, "N": [0]})"), "N[0]"));
  CHECK(contains(config_error(R"({"space": {"domain": {"type": "sphere"}}})"), "space.domain.type"));
  CHECK(contains(config_error(R"({"space": {"domain": {"type": "box", "length": [1, 1], "nodes": [16]}}})"),
                 "space.domain.nodes"));
  CHECK(contains(config_error(R"({"space": {"psi": "x^"}})"), "space.psi"));
  CHECK(contains(config_error(R"({"space": {}, "checks": ["poincare", "hardy"]})"), "checks[1]"));
  CHECK(contains(config_error(R"({"space": {}, "flow": {"tau": -1}})"), "flow.tau"));
  CHECK(contains(config_error("{\n\"space\": {},\n\"N\": [1,,]\n}"), "line 3"));
  CHECK(contains(config_error(R"({"N": [3]})"), "space: required"));
  CHECK_THROWS_AS(load_config("/nonexistent/fg.json"), ConfigError);
}

TEST_CASE("space describe on the model spaces") {
  auto e = gaussian("euclidean");
  e["N"] = {"inf", 3};
  const auto re = cmd_space_describe(parse_config(e)).report["space"];
  CHECK(re["S_F"].get<double>() == 1.0);
  CHECK(re["K_eff"]["inf"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(re["K_eff"]["3"].get<double>() < 0.0);
  CHECK(re["measure"]["total_mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));

  const auto ra = cmd_space_describe(parse_config(gaussian("asym1d"))).report["space"];
  CHECK(ra["S_F"].get<double>() == doctest::Approx(4.0));
  CHECK(ra["K_eff"]["inf"].get<double>() == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("json output is fixed-format and deterministic") {
  CHECK(dump_json(json{{"b", 0.1}, {"a", 1}}, 0) == R"({"a":1,"b":0.10000000000000001})");
  CHECK(dump_json(json{{"x", std::nan("")}, {"y", -INFINITY}}, 0) == R"({"x":"nan","y":"-inf"})");
  auto doc = gaussian("asym1d", 64);
  doc["bank"] = {{"seed", 5}, {"count", 4}};
  const auto cfg = parse_config(doc);
  const auto a = dump_json(cmd_ineq_check(cfg).report);
  const auto b = dump_json(cmd_ineq_check(cfg).report);
  CHECK(a == b);
  auto other = cfg;
  other.seed = 6;
  CHECK(dump_json(cmd_ineq_check(other).report) != a);
}

TEST_CASE("flow run") {
  SUBCASE("constant datum is frozen") {
    auto doc = gaussian("euclidean", 64);
    doc["flow"] = {{"u0", "2"}, {"tau", 0.01}, {"t_end", 0.1}};
    const auto r = cmd_flow_run(parse_config(doc));
    CHECK(r.exit_code == kExitPass);
    CHECK(std::isinf(r.report["flow"]["variance_rate"].get<double>()));
    CHECK(r.csv.substr(0, r.csv.find('\n')) == "t,energy,variance,entropy,fisher");
    CHECK(contains(r.csv, "\n0.01,0,0,0,0\n"));
  }
  SUBCASE("Gaussian rate") {
    auto doc = gaussian("euclidean");
    doc["flow"] = {{"u0", "1+0.5*x/3"}, {"tau", 0.002}, {"t_end", 4}, {"stride", 10}};
    const auto r = cmd_flow_run(parse_config(doc));
    CHECK(r.exit_code == kExitPass);
    CHECK(r.report["flow"]["variance_rate"].get<double>() >= 1.9);
  }
  SUBCASE("linear mode on the circle decays at 4 pi^2") {
    json doc{{"space", {{"domain", {{"type", "circle"}, {"length", 1}, {"nodes", 128}}}, {"psi", "0"}}},
             {"flow", {{"u0", "1+0.1*cos(2*pi*x)"}, {"tau", 2e-4}, {"t_end", 0.3}, {"stride", 5}}}};
    const auto r = cmd_flow_run(parse_config(doc));
    // Variance is quadratic in the amplitude.
    CHECK(r.report["flow"]["variance_rate"].get<double>() / 2.0 == doctest::Approx(4.0 * M_PI * M_PI).epsilon(0.02));
  }
}

TEST_CASE("ineq check and the falsification guard") {
  auto doc = gaussian("euclidean");
  doc["checks"] = {"poincare", "logsobolev"};
  doc["bank"] = {{"seed", 42}, {"count", 8}};
  const auto cfg = parse_config(doc);
  const auto ok = cmd_ineq_check(cfg);
  CHECK(ok.exit_code == kExitPass);
  CHECK(ok.report["summary"]["failed"] == 0);

  RunOptions doubled;
  doubled.override_k = 2.0;
  const auto bad = cmd_ineq_check(cfg, doubled);
  CHECK(bad.exit_code == kExitCheckFailed);
  bool near_extremal_failed = false;
  for (const auto& c : bad.report["checks"])
    if (c["id"] == "poincare" && c["subject"] == "s" && !c["pass"].get<bool>()) near_extremal_failed = true;
  CHECK(near_extremal_failed);
  CHECK(bad.report["override_k"] == 2.0);
}

TEST_CASE("identities on the circle") {
  json doc{{"space", {{"domain", {{"type", "circle"}, {"length", 1}, {"nodes", 128}}},
                      {"norm", {{"type", "asym1d"}, {"alpha", 2}, {"beta", 1}}},
                      {"psi", "0"}}}};
  const auto r = cmd_identities(parse_config(doc));
  CHECK(r.exit_code == kExitPass);
  for (const auto& id : r.report["identities"]) {
    INFO(id["name"]);
    if (id["name"] == "adjointness") {
      for (double v : id["residuals"]) CHECK(v <= 1e-13);
    } else {
      CHECK(id["order"].get<double>() >= 1.8);
    }
  }
}

TEST_CASE("command line exit codes") {
  auto doc = gaussian("euclidean", 64);
  doc["checks"] = {"poincare"};
  const auto good = write_config("good.json", doc);
  const auto out = (scratch_dir() / "out").string();
  CHECK(run_cli("space describe --config " + good + " --out " + out) == 0);
  CHECK(std::filesystem::exists(scratch_dir() / "out" / "space.json"));
  CHECK(run_cli("ineq check --config " + good + " --out " + out) == 0);
  CHECK(run_cli("ineq check --config " + good + " --out " + out + " --override-k 2") == 1);
  CHECK(run_cli("space describe --config " + good + " --out " + out + " --override-k 2") == 2);
  doc["N"] = {0.5};
  CHECK(run_cli("space describe --config " + write_config("bad.json", doc) + " --out " + out) == 2);
  CHECK(run_cli("space describe --config /nonexistent.json") == 2);
  CHECK(run_cli("bogus --config " + good) == 2);
  doc["N"] = {"inf"};
  doc["flow"] = {{"u0", "1+0.1*x"}, {"tau", 0.01}, {"t_end", 0.05}, {"max_iter", 1}, {"tol", 1e-300}};
  CHECK(run_cli("flow run --config " + write_config("solver.json", doc) + " --out " + out) == 3);
}
