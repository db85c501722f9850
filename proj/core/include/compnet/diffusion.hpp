#pragma once

// Diffusion steppers for two competing teams and the iteration runner.
//
// Rows are agents. Mixing with a left-stochastic A sends row l to row k with
// weight a(l, k), so a combine step is X <- A^T X.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "compnet/game.hpp"
#include "compnet/metrics.hpp"
#include "compnet/topology.hpp"

namespace compnet {

enum class Algorithm { AtcItc, AtcC, Cd, AtcItcPartialObs };

/// Accepts "atc-itc", "atc-c", "cd" and "atc-itc-po".
Algorithm parse_algorithm(const std::string& name);
const char* to_string(Algorithm a) noexcept;
/// ATC-C needs a strong cross-team subgraph; the others a weak one.
CrossMode required_mode(Algorithm a) noexcept;

struct Network {
  CombinationMatrix a1;
  CombinationMatrix a2;
  InferenceMatrix c;
};

/// Runs the matrix validators for the given algorithm, C checked in the mode
/// the algorithm requires.
ValidationReport validate_network(const Network& net, const TeamConfig& cfg, Algorithm algorithm);

/// One noise draw per agent (Team 1 first) for iteration i.
std::vector<NoiseDraw> draw_noise(const Game& game, std::uint64_t seed, std::int64_t iteration,
                                  StreamPurpose purpose = StreamPurpose::GradientNoise);

/// Algorithm 1. With infer = false the inference gradient is dropped and the
/// step is exactly step_cd.
NetworkState step_atc_itc(const NetworkState& state, const Game& game, const Network& net,
                          double mu, const std::vector<NoiseDraw>& noise, bool infer = true);

/// Algorithm 2: within-team ATC, then estimates copied from the opposing team.
NetworkState step_atc_c(const NetworkState& state, const Game& game, const Network& net,
                        double mu, const std::vector<NoiseDraw>& noise);

/// Algorithm 1 with the previous estimate forwarded unchanged.
NetworkState step_cd(const NetworkState& state, const Game& game, const Network& net, double mu,
                     const std::vector<NoiseDraw>& noise);

/// Algorithm 1 with the inference driven by the adversary-gradient oracle.
/// Throws CapabilityError when the game has none.
NetworkState step_atc_itc_po(const NetworkState& state, const Game& game, const Network& net,
                             double mu, const std::vector<NoiseDraw>& noise, bool infer = true);

NetworkState step(Algorithm algorithm, const NetworkState& state, const Game& game,
                  const Network& net, double mu, const std::vector<NoiseDraw>& noise,
                  bool infer = true);

/// Entries above this magnitude count as divergence.
inline constexpr double kDivergenceBound = 1e12;

enum class InitMode { Zero, GameDefault };

struct StepConfig {
  Algorithm algorithm = Algorithm::AtcItc;
  double mu = 0.01;
  std::int64_t iterations = 10000;
  std::uint64_t seed = 0;
  /// Iterations i > infer_cutoff skip the inference gradient.
  std::optional<std::int64_t> infer_cutoff;
  std::int64_t record_every = 1;
  InitMode init = InitMode::Zero;

  /// Throws ConfigError for mu <= 0, negative iterations or record_every < 1.
  void check() const;
};

/// Reference used for the mse column: the Nash point for affine games, or a
/// custom error of the state (the WGAN moment distance).
struct Reference {
  std::optional<Vector> z_star;
  std::function<double(const NetworkState&)> error;

  std::optional<double> evaluate(const NetworkState& state, const Vector& z_c) const;
};

struct RunResult {
  Trajectory trajectory;
  NetworkState final_state;
};

/// Starting state: all zeros, or the game's suggested strategies copied to
/// every row (estimates included).
NetworkState initial_state(const Game& game, InitMode mode, std::uint64_t seed);

/// Iterates the chosen stepper from the initial state, recording iteration 0
/// and every record_every-th iteration. Validates the network first
/// (ValidationError). On divergence throws DivergenceError, unless
/// keep_partial is set, in which case the trajectory up to the failure is
/// returned with diverged_at filled in.
RunResult run(const StepConfig& config, const Game& game, const Network& net,
              const Reference& reference = {}, bool keep_partial = false);

/// Mean over agents of |grad_x J_k| + |grad_y J_k| at each agent's own view,
/// with one fresh draw per agent from the metrics stream.
double mean_grad_norm(const NetworkState& state, const Game& game, std::uint64_t seed,
                      std::int64_t iteration);

}  // namespace compnet
