#include "compnet/cournot.hpp"

#include <random>

#include "compnet/errors.hpp"

namespace compnet {

CournotParams CournotParams::paper() {
  CournotParams p;
  p.costs = {5.0, 3.0, 3.0, 5.0, 3.0, 3.0};
  return p;
}

CournotGame::CournotGame(CournotParams params) : params_(std::move(params)) {
  if (params_.k1 < 1 || params_.k2 < 1) throw ConfigError("cournot: team sizes must be positive");
  if (static_cast<int>(params_.costs.size()) != params_.k1 + params_.k2) {
    throw ConfigError("cournot: need one cost per firm (K1 + K2 entries)");
  }
  if (params_.noise_amplitude < 0.0) throw ConfigError("cournot: noise amplitude must be >= 0");
}

double CournotGame::cost(AgentRef agent) const {
  return params_.costs[static_cast<std::size_t>(agent.global(config()))];
}

NoiseDraw CournotGame::sample_noise(AgentRef, Stream& stream) const {
  const double a = params_.noise_amplitude;
  if (a == 0.0) return {0.0, 0.0};
  std::uniform_real_distribution<double> u(-a, a);
  const double v = u(stream);
  const double z = u(stream);
  return {v, z};
}

double CournotGame::loss(AgentRef agent, const Vector& x, const Vector& y,
                         const NoiseDraw& noise) const {
  const double q = agent.team == Team::One ? x(agent.index) : y(agent.index);
  const double total = x.sum() + y.sum();
  const double price = params_.price_intercept - (params_.price_slope + noise[1]) * total;
  return (cost(agent) + noise[0]) * q * q - q * price;
}

Vector CournotGame::firm_grad(AgentRef agent, const Vector& x, const Vector& y, double v,
                              double z, bool own) const {
  const bool team_one = agent.team == Team::One;
  const Vector& mine = team_one ? x : y;
  const double q = mine(agent.index);
  const double slope = params_.price_slope + z;
  const int dim = (team_one == own) ? params_.k1 : params_.k2;
  Vector g = Vector::Constant(dim, slope * q);
  if (own) {
    const double total = x.sum() + y.sum();
    g(agent.index) += 2.0 * (cost(agent) + v) * q - params_.price_intercept + slope * total;
  }
  return g;
}

Vector CournotGame::grad_x(AgentRef agent, const Vector& x, const Vector& y,
                           const NoiseDraw& noise) const {
  return firm_grad(agent, x, y, noise[0], noise[1], agent.team == Team::One);
}

Vector CournotGame::grad_y(AgentRef agent, const Vector& x, const Vector& y,
                           const NoiseDraw& noise) const {
  return firm_grad(agent, x, y, noise[0], noise[1], agent.team == Team::Two);
}

Vector CournotGame::mean_grad_x(AgentRef agent, const Vector& x, const Vector& y) const {
  return firm_grad(agent, x, y, 0.0, 0.0, agent.team == Team::One);
}

Vector CournotGame::mean_grad_y(AgentRef agent, const Vector& x, const Vector& y) const {
  return firm_grad(agent, x, y, 0.0, 0.0, agent.team == Team::Two);
}

Vector CournotGame::adversary_grad(AgentRef agent, const Vector& x, const Vector& y,
                                   const NoiseDraw& noise) const {
  if (agent.team == Team::One) {
    const AgentRef rival{Team::Two, agent.index % params_.k2};
    return grad_y(rival, x, y, noise);
  }
  const AgentRef rival{Team::One, agent.index % params_.k1};
  return grad_x(rival, x, y, noise);
}

}  // namespace compnet
