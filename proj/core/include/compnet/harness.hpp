#pragma once

// Experiment orchestration behind the command-line subcommands.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "compnet/config.hpp"
#include "compnet/metrics.hpp"

namespace compnet {

enum ExitCode : int { kExitPass = 0, kExitMalformed = 1, kExitValidationFail = 2 };

/// Matrix validators for the configured algorithm plus, for affine games, the
/// monotonicity check. "passed" is the overall verdict.
nlohmann::json validate_experiment(const ExperimentConfig& config);

/// Spectral report of the configured network, with transient predictions for
/// the configured mu where the subdominant moduli allow it.
nlohmann::json spectral_experiment(const ExperimentConfig& config);

/// Steady-state means (last `window` fraction) of every recorded field,
/// divergence status, and initial / final values.
nlohmann::json summarize(const Trajectory& trajectory, double window);

/// First recorded iteration whose mse is at or below threshold.
std::optional<std::int64_t> first_hit(const Trajectory& trajectory, double threshold);

/// One CSV per seed (seed_<n>.csv) plus summary.json in `out`. Throws
/// ValidationError before running when the network fails validation.
nlohmann::json run_experiment(const ExperimentConfig& config, const std::filesystem::path& out);

/// Steady-state metrics per (mu, seed) in sweep.csv and ratios between adjacent
/// mu values in ratios.csv. Diverged cells are marked and skipped in the ratios.
nlohmann::json sweep_experiment(const ExperimentConfig& config, const std::filesystem::path& out);

/// Runs each algorithm of compare.algorithms at every seed and counts, per
/// seed, the first iteration reaching mse <= threshold (compare.csv).
nlohmann::json compare_experiment(const ExperimentConfig& config,
                                  const std::filesystem::path& out);

/// Calls fn(i) for i in [0, n) on a small thread pool; rethrows the first
/// exception after every worker has finished.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace compnet
