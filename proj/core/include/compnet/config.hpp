#pragma once

// Experiment configuration (JSON) and construction of the game and network it
// describes.
//
// {
//   "game": {"type": "cournot" | "quadratic" | "wgan", ...parameters},
//   "topology": {"preset": "cournot"} or
//               {"a1": SRC, "a2": SRC, "c_weak": SRC, "c_strong": SRC | "uniform", "c": SRC},
//   "algorithm": "atc-itc" | "atc-c" | "cd" | "atc-itc-po",
//   "mu": 0.05, "iterations": 10000, "seeds": [1, 2], "record_every": 1,
//   "infer_cutoff": null, "init": "zero" | "game-default", "steady_window": 0.5,
//   "output": "out",
//   "sweep": {"mus": [0.01, 0.005]},
//   "compare": {"algorithms": ["atc-itc-po", "cd"], "threshold": 1e-3}
// }
//
// A matrix source SRC is one of {"rows": [[...]]}, {"file": "path.json"}
// (a file holding {"rows": ...}, resolved against the config's directory),
// {"averaging": adjacency rows} or {"incoming": 0/1 pattern}, which is
// column-normalised. "c" applies to every algorithm and overrides
// c_weak / c_strong.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "compnet/diffusion.hpp"
#include "compnet/game.hpp"
#include "compnet/topology.hpp"

namespace compnet {

struct TopologySpec {
  Matrix a1;
  Matrix a2;
  std::optional<Matrix> c;  // used for every algorithm when present
  std::optional<Matrix> c_weak;
  std::optional<Matrix> c_strong;

  int k1() const noexcept { return static_cast<int>(a1.rows()); }
  int k2() const noexcept { return static_cast<int>(a2.rows()); }
};

struct ExperimentConfig {
  nlohmann::json game;
  TopologySpec topology;
  Algorithm algorithm = Algorithm::AtcItc;
  double mu = 0.01;
  std::int64_t iterations = 10000;
  std::vector<std::uint64_t> seeds{0};
  std::int64_t record_every = 1;
  std::optional<std::int64_t> infer_cutoff;
  InitMode init = InitMode::Zero;
  double steady_window = 0.5;
  std::filesystem::path output = "out";
  std::vector<double> sweep_mus;
  std::vector<Algorithm> compare_algorithms;
  double compare_threshold = 1e-3;

  /// Throws ConfigError for missing or ill-typed fields and unreadable files.
  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);

  StepConfig step_config(std::uint64_t seed) const;
  StepConfig step_config(std::uint64_t seed, Algorithm algorithm, double mu) const;
};

/// Reads {"rows": [[...]]}.
Matrix read_matrix_file(const std::filesystem::path& path);
Matrix matrix_from_rows(const nlohmann::json& rows);
nlohmann::json matrix_to_rows(const Matrix& m);

/// Everything a run needs, built from a config.
struct Experiment {
  std::shared_ptr<const Game> game;
  Network network;
  PerronWeights weights;
  Reference reference;
};

/// Inference matrix the config assigns to an algorithm.
InferenceMatrix inference_for(const TopologySpec& t, Algorithm algorithm);

/// Builds the game, the network for `algorithm`, the Perron weights and the
/// mse reference (Nash point for affine games, moment distance for the WGAN).
/// Throws ValidationError when A1 or A2 have no Perron vector.
Experiment build_experiment(const ExperimentConfig& config, Algorithm algorithm);

std::shared_ptr<const Game> build_game(const nlohmann::json& game, const TopologySpec& topology,
                                       const PerronWeights& weights);

}  // namespace compnet
