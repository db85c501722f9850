#include "compnet/quadratic.hpp"

#include <random>

#include "compnet/errors.hpp"

namespace compnet {

namespace {

Matrix random_matrix(std::mt19937_64& gen, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(gen);
  }
  return m;
}

Matrix random_orthogonal(std::mt19937_64& gen, int n) {
  return random_matrix(gen, n, n).householderQr().householderQ();
}

// Symmetric matrix with eigenvalues nu, then evenly spaced up to nu + spread.
Matrix prescribed_spectrum(std::mt19937_64& gen, int n, double nu, double spread) {
  Vector eig(n);
  for (int i = 0; i < n; ++i) eig(i) = nu + (n > 1 ? spread * i / (n - 1) : 0.0);
  const Matrix u = random_orthogonal(gen, n);
  return u * eig.asDiagonal() * u.transpose();
}

}  // namespace

QuadraticGame::QuadraticGame(QuadraticParams params, const PerronWeights& weights)
    : params_(params) {
  if (params_.k1 < 1 || params_.k2 < 1 || params_.m1 < 1 || params_.m2 < 1) {
    throw ConfigError("quadratic: sizes must be positive");
  }
  if (!(params_.nu > 0.0)) throw ConfigError("quadratic: nu must be positive");
  if (weights.p1.size() != params_.k1 || weights.p2.size() != params_.k2) {
    throw StructuralError("quadratic: Perron weights do not match the team sizes");
  }
  std::mt19937_64 gen(params_.seed);
  const int m1 = params_.m1, m2 = params_.m2;
  team_.p = prescribed_spectrum(gen, m1, params_.nu, params_.spectrum_spread);
  team_.r = prescribed_spectrum(gen, m2, params_.nu, params_.spectrum_spread);
  team_.q = params_.coupling * random_matrix(gen, m1, m2);
  team_.a = params_.offset * random_matrix(gen, m1, 1);
  team_.b = params_.offset * random_matrix(gen, m2, 1);

  agents_.reserve(static_cast<std::size_t>(params_.k1 + params_.k2));
  for (Team team : {Team::One, Team::Two}) {
    const Vector& w = weights.of(team);
    const int n = static_cast<int>(w.size());
    std::vector<Blocks> raw(static_cast<std::size_t>(n));
    Blocks mean{Matrix::Zero(m1, m1), Matrix::Zero(m1, m2), Matrix::Zero(m2, m2),
                Vector::Zero(m1), Vector::Zero(m2)};
    const double s = params_.heterogeneity;
    for (int k = 0; k < n; ++k) {
      auto& d = raw[static_cast<std::size_t>(k)];
      const Matrix dp = s * random_matrix(gen, m1, m1);
      const Matrix dr = s * random_matrix(gen, m2, m2);
      d.p = 0.5 * (dp + dp.transpose());
      d.r = 0.5 * (dr + dr.transpose());
      d.q = s * random_matrix(gen, m1, m2);
      d.a = s * random_matrix(gen, m1, 1);
      d.b = s * random_matrix(gen, m2, 1);
      mean.p += w(k) * d.p;
      mean.q += w(k) * d.q;
      mean.r += w(k) * d.r;
      mean.a += w(k) * d.a;
      mean.b += w(k) * d.b;
    }
    for (const auto& d : raw) {
      agents_.push_back({team_.p + d.p - mean.p, team_.q + d.q - mean.q, team_.r + d.r - mean.r,
                         team_.a + d.a - mean.a, team_.b + d.b - mean.b});
    }
  }
}

const QuadraticGame::Blocks& QuadraticGame::local(AgentRef agent) const {
  const auto idx = agent.team == Team::One ? agent.index : params_.k1 + agent.index;
  return agents_.at(static_cast<std::size_t>(idx));
}

NoiseDraw QuadraticGame::sample_noise(AgentRef, Stream& stream) const {
  NoiseDraw draw(static_cast<std::size_t>(params_.m1 + params_.m2), 0.0);
  if (params_.noise_std == 0.0) return draw;
  std::normal_distribution<double> normal(0.0, params_.noise_std);
  for (auto& v : draw) v = normal(stream);
  return draw;
}

double QuadraticGame::loss(AgentRef agent, const Vector& x, const Vector& y,
                           const NoiseDraw& noise) const {
  const Blocks& l = local(agent);
  double value = 0.5 * x.dot(l.p * x) + x.dot(l.q * y) - 0.5 * y.dot(l.r * y) + l.a.dot(x) +
                 l.b.dot(y);
  value *= sign(agent);
  for (int i = 0; i < params_.m1; ++i) value += noise[static_cast<std::size_t>(i)] * x(i);
  for (int i = 0; i < params_.m2; ++i) {
    value += noise[static_cast<std::size_t>(params_.m1 + i)] * y(i);
  }
  return value;
}

Vector QuadraticGame::mean_grad_x(AgentRef agent, const Vector& x, const Vector& y) const {
  const Blocks& l = local(agent);
  return sign(agent) * (l.p * x + l.q * y + l.a);
}

Vector QuadraticGame::mean_grad_y(AgentRef agent, const Vector& x, const Vector& y) const {
  const Blocks& l = local(agent);
  return sign(agent) * (l.q.transpose() * x - l.r * y + l.b);
}

Vector QuadraticGame::grad_x(AgentRef agent, const Vector& x, const Vector& y,
                             const NoiseDraw& noise) const {
  Vector g = mean_grad_x(agent, x, y);
  for (int i = 0; i < params_.m1; ++i) g(i) += noise[static_cast<std::size_t>(i)];
  return g;
}

Vector QuadraticGame::grad_y(AgentRef agent, const Vector& x, const Vector& y,
                             const NoiseDraw& noise) const {
  Vector g = mean_grad_y(agent, x, y);
  for (int i = 0; i < params_.m2; ++i) g(i) += noise[static_cast<std::size_t>(params_.m1 + i)];
  return g;
}

Vector QuadraticGame::adversary_grad(AgentRef agent, const Vector& x, const Vector& y,
                                     const NoiseDraw& noise) const {
  return -cross_grad(agent, x, y, noise);
}

}  // namespace compnet
