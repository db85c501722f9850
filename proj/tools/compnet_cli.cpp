// compnet: validate, analyse and simulate two competing networks of agents.
//
//   compnet validate --config cfg.json
//   compnet spectral --config cfg.json
//   compnet run      --config cfg.json --out dir [--seed n]
//   compnet sweep    --config cfg.json --out dir [--seed n]
//   compnet compare  --config cfg.json --out dir [--seed n]
//
// Exit codes: 0 pass, 1 malformed input or missing file, 2 validation failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "compnet/config.hpp"
#include "compnet/errors.hpp"
#include "compnet/harness.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

compnet::ExperimentConfig load(const Options& opt) {
  auto cfg = compnet::ExperimentConfig::load(opt.config);
  if (opt.seed) cfg.seeds = {*opt.seed};
  if (!opt.out.empty()) cfg.output = opt.out;
  return cfg;
}

void add_common(CLI::App* cmd, Options& opt, bool writes) {
  cmd->add_option("--config", opt.config, "experiment config (JSON)")->required();
  if (writes) {
    cmd->add_option("--out", opt.out, "output directory (overrides the config's \"output\")");
    cmd->add_option("--seed", opt.seed, "run this single seed instead of the config's list");
  }
}

int dispatch(const std::string& name, const Options& opt) {
  const compnet::ExperimentConfig cfg = load(opt);
  if (name == "validate") {
    const nlohmann::json report = compnet::validate_experiment(cfg);
    std::cout << report.dump(2) << '\n';
    return report.at("passed").get<bool>() ? compnet::kExitPass : compnet::kExitValidationFail;
  }
  if (name == "spectral") {
    std::cout << compnet::spectral_experiment(cfg).dump(2) << '\n';
    return compnet::kExitPass;
  }
  nlohmann::json summary;
  if (name == "run") {
    summary = compnet::run_experiment(cfg, cfg.output);
  } else if (name == "sweep") {
    summary = compnet::sweep_experiment(cfg, cfg.output);
  } else {
    summary = compnet::compare_experiment(cfg, cfg.output);
  }
  std::cout << summary.dump(2) << '\n';
  return compnet::kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation harness for stochastic games between two networks of agents"};
  app.require_subcommand(1);
  Options opt;
  for (const auto& [name, help, writes] : {
           std::tuple{"validate", "check matrices and game monotonicity; JSON report", false},
           std::tuple{"spectral", "print the spectral report as JSON", false},
           std::tuple{"run", "simulate every seed, write per-seed CSV and summary.json", true},
           std::tuple{"sweep", "steady-state metrics over sweep.mus x seeds", true},
           std::tuple{"compare", "iterations to threshold for compare.algorithms", true},
       }) {
    add_common(app.add_subcommand(name, help), opt, writes);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? compnet::kExitPass : compnet::kExitMalformed;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return dispatch(name, opt);
  } catch (const compnet::ValidationError& e) {
    std::cerr << "compnet " << name << ": validation failed: " << e.what() << '\n';
    return compnet::kExitValidationFail;
  } catch (const compnet::MonotonicityError& e) {
    std::cerr << "compnet " << name << ": " << e.what() << '\n';
    return compnet::kExitValidationFail;
  } catch (const compnet::Error& e) {
    std::cerr << "compnet " << name << ": " << e.what() << '\n';
    return compnet::kExitMalformed;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "compnet " << name << ": malformed config: " << e.what() << '\n';
    return compnet::kExitMalformed;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "compnet " << name << ": " << e.what() << '\n';
    return compnet::kExitMalformed;
  }
}
