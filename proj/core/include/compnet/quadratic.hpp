#pragma once

// Synthetic zero-sum quadratic game with a prescribed monotonicity constant.
//
// Team-level cost J(x, y) = 1/2 x^T P x + x^T Q y - 1/2 y^T R y + a^T x + b^T y,
// with J^(1) = J and J^(2) = -J. Agents hold heterogeneous copies
// (P + dP_k, Q + dQ_k, ...) whose deviations have zero Perron-weighted mean
// inside each team, so the team operator is exactly
//   F(z) = [[P, Q], [-Q^T, R]] z + [a; -b]
// and lambda_min of its symmetric part equals min(lambda_min(P), lambda_min(R)) = nu.
// Gradient noise is additive Normal(0, noise_std^2) per coordinate.

#include <cstdint>
#include <vector>

#include "compnet/game.hpp"

namespace compnet {

struct QuadraticParams {
  int k1 = 3;
  int k2 = 3;
  int m1 = 2;
  int m2 = 2;
  double nu = 0.5;             // smallest eigenvalue of P and R
  double spectrum_spread = 1.0; // remaining eigenvalues lie in [nu, nu + spread]
  double coupling = 1.0;        // scale of Q
  double heterogeneity = 0.5;   // scale of the per-agent deviations
  double offset = 1.0;          // scale of the linear terms
  double noise_std = 0.1;
  std::uint64_t seed = 7;
};

class QuadraticGame final : public Game {
 public:
  /// The Perron weights fix how per-agent deviations cancel inside each team.
  QuadraticGame(QuadraticParams params, const PerronWeights& weights);

  std::string name() const override { return "quadratic"; }
  TeamConfig config() const override { return {params_.k1, params_.k2, params_.m1, params_.m2}; }

  NoiseDraw sample_noise(AgentRef agent, Stream& stream) const override;

  double loss(AgentRef agent, const Vector& x, const Vector& y,
              const NoiseDraw& noise) const override;
  Vector grad_x(AgentRef agent, const Vector& x, const Vector& y,
                const NoiseDraw& noise) const override;
  Vector grad_y(AgentRef agent, const Vector& x, const Vector& y,
                const NoiseDraw& noise) const override;
  Vector mean_grad_x(AgentRef agent, const Vector& x, const Vector& y) const override;
  Vector mean_grad_y(AgentRef agent, const Vector& x, const Vector& y) const override;

  /// Zero-sum surrogate: the negated cross gradient of the agent's own cost.
  bool has_adversary_oracle() const override { return true; }
  Vector adversary_grad(AgentRef agent, const Vector& x, const Vector& y,
                        const NoiseDraw& noise) const override;

  bool is_affine() const override { return true; }
  bool is_zero_sum() const override { return true; }

  /// Team-level blocks.
  const Matrix& p() const noexcept { return team_.p; }
  const Matrix& q() const noexcept { return team_.q; }
  const Matrix& r() const noexcept { return team_.r; }
  const Vector& a() const noexcept { return team_.a; }
  const Vector& b() const noexcept { return team_.b; }

 private:
  struct Blocks {
    Matrix p, q, r;
    Vector a, b;
  };

  const Blocks& local(AgentRef agent) const;
  double sign(AgentRef agent) const { return agent.team == Team::One ? 1.0 : -1.0; }

  QuadraticParams params_;
  Blocks team_;
  std::vector<Blocks> agents_;  // Team-1 agents first
};

}  // namespace compnet
