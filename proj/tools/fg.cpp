// fg: batch front end for spaces, flows, inequality matrices and identity suites.
#include "fg/commands.hpp"
#include "fg/error.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gamma-calculus toolkit on discretized weighted Minkowski spaces"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> override_k;
  app.add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (default: output.dir from the config)");
  app.add_option("--seed", seed, "Test bank and random-field seed");
  app.add_option("--override-k", override_k, "Replace K_eff by this value (falsification runs)");

  auto* space = app.add_subcommand("space", "Weighted space summaries")->require_subcommand(1);
  auto* describe = space->add_subcommand("describe", "S_F, K_eff per N and measure statistics");
  auto* flow = app.add_subcommand("flow", "Nonlinear heat flow")->require_subcommand(1);
  auto* flow_run = flow->add_subcommand("run", "Evolve u0 and fit decay rates");
  auto* ineq = app.add_subcommand("ineq", "Functional inequalities")->require_subcommand(1);
  auto* ineq_check = ineq->add_subcommand("check", "Run the checker matrix over the test bank");
  auto* ids = app.add_subcommand("identities", "Calculus identities")->require_subcommand(1);
  auto* ids_run = ids->add_subcommand("run", "Residuals at two resolutions with convergence orders");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? fg::kExitPass : fg::kExitBadConfig;
  }

  try {
    auto cfg = fg::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    fg::RunOptions opts;
    opts.override_k = override_k;
    if (override_k && !(flow_run->parsed() || ineq_check->parsed())) {
      std::cerr << "error: --override-k applies to 'flow run' and 'ineq check' only\n";
      return fg::kExitBadConfig;
    }

    fg::CommandResult result;
    std::string stem;
    if (describe->parsed()) {
      result = fg::cmd_space_describe(cfg);
      stem = "space";
    } else if (flow_run->parsed()) {
      result = fg::cmd_flow_run(cfg, opts);
      stem = "flow";
    } else if (ineq_check->parsed()) {
      result = fg::cmd_ineq_check(cfg, opts);
      stem = "ineq";
    } else if (ids_run->parsed()) {
      result = fg::cmd_identities(cfg);
      stem = "identities";
    }

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / (stem + ".json"), fg::dump_json(result.report) + "\n");
    if (!result.csv.empty()) write_file(dir / "series.csv", result.csv);
    std::cout << result.summary << "\n" << "report: " << (dir / (stem + ".json")).string() << "\n";
    return result.exit_code;
  } catch (const fg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return fg::kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fg::kExitRuntime;
  }
}
