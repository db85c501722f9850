#pragma once

// Game abstraction shared by every concrete two-team game.
//
// Agent k of team t owns a local cost J_k(x, y). Team 1 minimises the
// Perron-weighted sum of its agents' costs over x, Team 2 does the same over y.
// Stochastic gradients are evaluated at an explicit noise draw so callers can
// freeze the randomness (finite differences, matched-seed comparisons).

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "compnet/rng.hpp"
#include "compnet/topology.hpp"

namespace compnet {

using NoiseDraw = std::vector<double>;

struct AgentRef {
  Team team = Team::One;
  int index = 0;  // position within the team

  int global(const TeamConfig& cfg) const noexcept {
    return team == Team::One ? index : cfg.k1 + index;
  }
};

class Game {
 public:
  virtual ~Game() = default;

  virtual std::string name() const = 0;
  /// Agent counts and strategy dimensions.
  virtual TeamConfig config() const = 0;

  virtual NoiseDraw sample_noise(AgentRef agent, Stream& stream) const = 0;

  /// Sampled local cost at a fixed noise draw.
  virtual double loss(AgentRef agent, const Vector& x, const Vector& y,
                      const NoiseDraw& noise) const = 0;
  virtual Vector grad_x(AgentRef agent, const Vector& x, const Vector& y,
                        const NoiseDraw& noise) const = 0;
  virtual Vector grad_y(AgentRef agent, const Vector& x, const Vector& y,
                        const NoiseDraw& noise) const = 0;

  /// Expectation of grad_x / grad_y over the noise.
  virtual Vector mean_grad_x(AgentRef agent, const Vector& x, const Vector& y) const = 0;
  virtual Vector mean_grad_y(AgentRef agent, const Vector& x, const Vector& y) const = 0;

  /// Partially observable adversary gradient: for a Team-1 agent, a stochastic
  /// gradient with respect to y of a surrogate for Team 2's cost; for a Team-2
  /// agent, the same with respect to x for Team 1's cost.
  virtual bool has_adversary_oracle() const { return false; }
  virtual Vector adversary_grad(AgentRef agent, const Vector& x, const Vector& y,
                                const NoiseDraw& noise) const;

  /// True when the team operator F is affine in z.
  virtual bool is_affine() const { return false; }
  virtual bool is_zero_sum() const { return false; }

  /// Starting strategy for a team; zero unless the game overrides it.
  virtual Vector initial_strategy(Team team, std::uint64_t seed) const;

  /// Gradient with respect to the agent's own decision variable.
  Vector own_grad(AgentRef agent, const Vector& x, const Vector& y, const NoiseDraw& noise) const {
    return agent.team == Team::One ? grad_x(agent, x, y, noise) : grad_y(agent, x, y, noise);
  }
  Vector mean_own_grad(AgentRef agent, const Vector& x, const Vector& y) const {
    return agent.team == Team::One ? mean_grad_x(agent, x, y) : mean_grad_y(agent, x, y);
  }
  /// Gradient with respect to the opposing team's variable.
  Vector cross_grad(AgentRef agent, const Vector& x, const Vector& y,
                    const NoiseDraw& noise) const {
    return agent.team == Team::One ? grad_y(agent, x, y, noise) : grad_x(agent, x, y, noise);
  }
};

/// F(z) = [sum_{k in Team 1} p_k grad_x J_k(x, y); sum_{k in Team 2} p_k grad_y J_k(x, y)].
Vector team_operator(const Game& game, const PerronWeights& p, const Vector& z);

Vector stack(const Vector& x, const Vector& y);

struct AffineOperator {
  Matrix h;
  Vector b;
};

/// (H, b) with F(z) = H z + b, assembled from F at the origin and the unit
/// vectors and verified at further probe points.
/// Throws CapabilityError for a game that is not affine.
AffineOperator affine_operator(const Game& game, const PerronWeights& p);

/// Smallest eigenvalue of (H + H^T) / 2.
double monotonicity_constant(const Matrix& h);

struct NashPoint {
  Vector x_star;
  Vector y_star;

  Vector z() const { return stack(x_star, y_star); }
};

/// Solves H z = -b. Throws MonotonicityError unless the symmetric part of H
/// is positive definite.
NashPoint nash_oracle(const Matrix& h, const Vector& b, int m1);

struct GamePoint {
  Vector x;
  Vector y;
};

/// Worst relative error between analytic gradients and central differences of
/// the sampled loss, over every coordinate of every agent, at one frozen noise
/// draw per agent. Relative error is |a - d| / max(1, |a|, |d|).
double fd_gradient_check(const Game& game, const GamePoint& point, double h,
                         std::uint64_t noise_seed = 0);

struct GameConstants {
  double nu = std::numeric_limits<double>::quiet_NaN();  // strong monotonicity
  double lipschitz = 0.0;                                // L_f, sampled
  double disagreement = 0.0;                             // G over the box
  double noise_std = 0.0;                                // sigma, Monte Carlo
  double box_halfwidth = 0.0;

  nlohmann::json to_json() const;
};

/// Estimates the game constants: nu exactly for affine games, the others by
/// sampling the box [-halfwidth, halfwidth]^(M1+M2).
GameConstants estimate_constants(const Game& game, const PerronWeights& p,
                                 double box_halfwidth = 2.0, std::uint64_t seed = 0,
                                 int samples = 2000);

/// Max over agents and both blocks of ||grad_w J_k - grad_w J^(t)|| at z.
double gradient_disagreement(const Game& game, const PerronWeights& p, const Vector& z);

}  // namespace compnet
