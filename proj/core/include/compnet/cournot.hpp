#pragma once

// Cournot team competition. Team 1 jointly decides the production vector x
// (one entry per Team-1 firm), Team 2 the vector y. Firm l of Team 1 has the
// expected cost
//
//   J_l(x, y) = c_l x(l)^2 - x(l) (P - w (1^T x + 1^T y)),
//
// and the sampled cost replaces c_l by c_l + v and w by w + z with v, z drawn
// uniformly from [-a, a]. Team-2 firms are symmetric in y.

#include <vector>

#include "compnet/game.hpp"

namespace compnet {

struct CournotParams {
  std::vector<double> costs;    // c per firm: Team-1 firms first, then Team-2 firms
  int k1 = 3;
  int k2 = 3;
  double price_intercept = 5.0;  // P
  double price_slope = 3.0;      // w
  double noise_amplitude = 0.1;  // half-width a of the uniform perturbations

  /// c1 = c4 = 5, c2 = c3 = c5 = c6 = 3, P = 5, w = 3, a = 0.1.
  static CournotParams paper();
};

class CournotGame final : public Game {
 public:
  explicit CournotGame(CournotParams params);

  std::string name() const override { return "cournot"; }
  TeamConfig config() const override { return {params_.k1, params_.k2, params_.k1, params_.k2}; }

  /// Draw layout: {v, z}.
  NoiseDraw sample_noise(AgentRef agent, Stream& stream) const override;

  double loss(AgentRef agent, const Vector& x, const Vector& y,
              const NoiseDraw& noise) const override;
  Vector grad_x(AgentRef agent, const Vector& x, const Vector& y,
                const NoiseDraw& noise) const override;
  Vector grad_y(AgentRef agent, const Vector& x, const Vector& y,
                const NoiseDraw& noise) const override;
  Vector mean_grad_x(AgentRef agent, const Vector& x, const Vector& y) const override;
  Vector mean_grad_y(AgentRef agent, const Vector& x, const Vector& y) const override;

  /// Each firm observes the sampled cost of one opposing firm: Team-1 firm k
  /// uses Team-2 firm (k mod K2), and vice versa.
  bool has_adversary_oracle() const override { return true; }
  Vector adversary_grad(AgentRef agent, const Vector& x, const Vector& y,
                        const NoiseDraw& noise) const override;

  bool is_affine() const override { return true; }

  const CournotParams& params() const noexcept { return params_; }
  double cost(AgentRef agent) const;

 private:
  // Gradient of firm `agent`'s sampled cost with respect to its own team's
  // vector (own == true) or the other team's vector.
  Vector firm_grad(AgentRef agent, const Vector& x, const Vector& y, double v, double z,
                   bool own) const;

  CournotParams params_;
};

}  // namespace compnet
