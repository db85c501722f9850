#include "compnet/wgan.hpp"

#include <cmath>
#include <random>

#include "compnet/errors.hpp"

namespace compnet {

WganParams WganParams::paper() { return WganParams{}; }

WganGame::WganGame(WganParams params)
    : params_(params), quadrature_(gauss_hermite(params.quadrature_nodes)) {
  if (params_.k1 < 1 || params_.k2 < 1) throw ConfigError("wgan: team sizes must be positive");
  if (params_.hidden < 1) throw ConfigError("wgan: hidden width must be positive");
  if (params_.batch < 1) throw ConfigError("wgan: batch size must be >= 1");
  if (params_.data_std < 0.0) throw ConfigError("wgan: data std must be >= 0");
}

TeamConfig WganGame::config() const {
  return {params_.k1, params_.k2, 3 * params_.hidden + 1, 2};
}

NoiseDraw WganGame::sample_noise(AgentRef, Stream& stream) const {
  const auto b = static_cast<std::size_t>(params_.batch);
  NoiseDraw draw(2 * b);
  std::normal_distribution<double> data(params_.data_mean, params_.data_std);
  std::normal_distribution<double> latent(0.0, 1.0);
  for (std::size_t i = 0; i < b; ++i) draw[i] = data(stream);
  for (std::size_t i = 0; i < b; ++i) draw[b + i] = latent(stream);
  return draw;
}

double WganGame::generate(const Vector& x, double z) const {
  const int h = params_.hidden;
  double out = x(3 * h);
  for (int j = 0; j < h; ++j) out += x(2 * h + j) * std::tanh(x(j) * z + x(h + j));
  return out;
}

Vector WganGame::generator_jacobian(const Vector& x, double z) const {
  const int h = params_.hidden;
  Vector jac(3 * h + 1);
  for (int j = 0; j < h; ++j) {
    const double act = std::tanh(x(j) * z + x(h + j));
    const double slope = x(2 * h + j) * (1.0 - act * act);
    jac(j) = slope * z;
    jac(h + j) = slope;
    jac(2 * h + j) = act;
  }
  jac(3 * h) = 1.0;
  return jac;
}

double WganGame::loss(AgentRef agent, const Vector& x, const Vector& y,
                      const NoiseDraw& noise) const {
  const auto b = static_cast<std::size_t>(params_.batch);
  double critic = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    const double u = noise[i];
    const double g = generate(x, noise[b + i]);
    critic += (y(0) * u + y(1) * u * u) - (y(0) * g + y(1) * g * g);
  }
  critic /= static_cast<double>(b);
  const double value =
      critic + params_.lambda_x * x.squaredNorm() - params_.lambda_y * y.squaredNorm();
  return sign(agent) * value;
}

Vector WganGame::team1_grad_x(const Vector& x, const Vector& y, const NoiseDraw& noise) const {
  const auto b = static_cast<std::size_t>(params_.batch);
  Vector g = Vector::Zero(x.size());
  for (std::size_t i = 0; i < b; ++i) {
    const double z = noise[b + i];
    const double out = generate(x, z);
    g -= (y(0) + 2.0 * y(1) * out) * generator_jacobian(x, z);
  }
  g /= static_cast<double>(b);
  g += 2.0 * params_.lambda_x * x;
  return g;
}

Vector WganGame::team1_grad_y(const Vector& x, const Vector& y, const NoiseDraw& noise) const {
  const auto b = static_cast<std::size_t>(params_.batch);
  Vector g = Vector::Zero(2);
  for (std::size_t i = 0; i < b; ++i) {
    const double u = noise[i];
    const double out = generate(x, noise[b + i]);
    g(0) += u - out;
    g(1) += u * u - out * out;
  }
  g /= static_cast<double>(b);
  g -= 2.0 * params_.lambda_y * y;
  return g;
}

Vector WganGame::grad_x(AgentRef agent, const Vector& x, const Vector& y,
                        const NoiseDraw& noise) const {
  return sign(agent) * team1_grad_x(x, y, noise);
}

Vector WganGame::grad_y(AgentRef agent, const Vector& x, const Vector& y,
                        const NoiseDraw& noise) const {
  return sign(agent) * team1_grad_y(x, y, noise);
}

Vector WganGame::mean_grad_x(AgentRef agent, const Vector& x, const Vector& y) const {
  Vector g = Vector::Zero(x.size());
  for (Eigen::Index i = 0; i < quadrature_.nodes.size(); ++i) {
    const double z = quadrature_.nodes(i);
    const double out = generate(x, z);
    g -= quadrature_.weights(i) * (y(0) + 2.0 * y(1) * out) * generator_jacobian(x, z);
  }
  g += 2.0 * params_.lambda_x * x;
  return sign(agent) * g;
}

Vector WganGame::mean_grad_y(AgentRef agent, const Vector& x, const Vector& y) const {
  const GeneratorMoments m = moments(x);
  const double pi = params_.data_mean;
  const double s = params_.data_std;
  Vector g(2);
  g(0) = pi - m.mean;
  g(1) = (pi * pi + s * s) - (m.stddev * m.stddev + m.mean * m.mean);
  g -= 2.0 * params_.lambda_y * y;
  return sign(agent) * g;
}

Vector WganGame::adversary_grad(AgentRef agent, const Vector& x, const Vector& y,
                                const NoiseDraw& noise) const {
  return -cross_grad(agent, x, y, noise);
}

Vector WganGame::initial_strategy(Team team, std::uint64_t seed) const {
  const int dim = config().strategy_dim(team);
  Vector v = Vector::Zero(dim);
  if (team == Team::One && params_.init_scale > 0.0) {
    Stream stream = make_stream(seed, 0, 0, StreamPurpose::Initialization);
    std::normal_distribution<double> normal(0.0, params_.init_scale);
    for (int i = 0; i < dim; ++i) v(i) = normal(stream);
  }
  return v;
}

GeneratorMoments WganGame::moments(const Vector& x) const {
  double m1 = 0.0, m2 = 0.0;
  for (Eigen::Index i = 0; i < quadrature_.nodes.size(); ++i) {
    const double g = generate(x, quadrature_.nodes(i));
    m1 += quadrature_.weights(i) * g;
    m2 += quadrature_.weights(i) * g * g;
  }
  return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1))};
}

GeneratorMoments estimate_mean_std(const WganGame& game, const Vector& x, int n_samples,
                                   Stream& stream) {
  if (n_samples < 2) throw ArgumentError("estimate_mean_std needs at least two samples");
  std::normal_distribution<double> latent(0.0, 1.0);
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    // Welford update
    const double g = game.generate(x, latent(stream));
    const double delta = g - mean;
    mean += delta / (i + 1);
    m2 += delta * (g - mean);
  }
  return {mean, std::sqrt(m2 / (n_samples - 1))};
}

}  // namespace compnet
