#pragma once

// Toy Wasserstein GAN learning the mean and spread of a one-dimensional
// Gaussian, split into a generator team (x) and a discriminator team (y).
//
// Generator G(x; z): 1 -> hidden (tanh) -> 1 with biases, parameters laid out
// as [w_in, b_in, w_out, b_out]. Discriminator D(y; u) = y1 u + y2 u^2.
// Team-1 sampled cost: mean_b [D(y; u_b) - D(y; G(x; z_b))] + lx |x|^2 - ly |y|^2,
// Team-2 sampled cost is its negation.

#include <cstdint>

#include "compnet/game.hpp"
#include "compnet/quadrature.hpp"

namespace compnet {

struct WganParams {
  int k1 = 6;
  int k2 = 4;
  int hidden = 5;
  int batch = 32;
  double lambda_x = 1e-5;
  double lambda_y = 1e-3;
  double data_mean = 0.0;  // pi
  double data_std = 0.01;  // sigma of the true samples
  /// Generator parameters start at Normal(0, init_scale^2), shared by every
  /// agent holding a copy of x; 0 keeps the all-zero start.
  double init_scale = 0.0;
  int quadrature_nodes = 48;

  static WganParams paper();
};

struct GeneratorMoments {
  double mean = 0.0;
  double stddev = 0.0;
};

class WganGame final : public Game {
 public:
  explicit WganGame(WganParams params);

  std::string name() const override { return "wgan"; }
  TeamConfig config() const override;

  /// Draw layout: batch samples u_1..u_B followed by z_1..z_B.
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

  bool is_zero_sum() const override { return true; }

  Vector initial_strategy(Team team, std::uint64_t seed) const override;

  double generate(const Vector& x, double z) const;
  /// dG/dx at one latent sample.
  Vector generator_jacobian(const Vector& x, double z) const;

  /// Exact first two moments of G(x; Z), Z ~ Normal(0, 1), by quadrature.
  GeneratorMoments moments(const Vector& x) const;

  const WganParams& params() const noexcept { return params_; }

 private:
  double sign(AgentRef agent) const { return agent.team == Team::One ? 1.0 : -1.0; }
  // Team-1 gradients; Team-2 gradients are their negation.
  Vector team1_grad_x(const Vector& x, const Vector& y, const NoiseDraw& noise) const;
  Vector team1_grad_y(const Vector& x, const Vector& y, const NoiseDraw& noise) const;

  WganParams params_;
  GaussHermite quadrature_;
};

/// Empirical mean and standard deviation of G(x; z) over n draws z ~ Normal(0, 1).
GeneratorMoments estimate_mean_std(const WganGame& game, const Vector& x, int n_samples,
                                   Stream& stream);

}  // namespace compnet
