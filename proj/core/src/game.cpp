#include "compnet/game.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "compnet/errors.hpp"

namespace compnet {

Vector Game::adversary_grad(AgentRef, const Vector&, const Vector&, const NoiseDraw&) const {
  throw CapabilityError(name() + " has no partially observable adversary gradient");
}

Vector Game::initial_strategy(Team team, std::uint64_t) const {
  return Vector::Zero(config().strategy_dim(team));
}

Vector stack(const Vector& x, const Vector& y) {
  Vector z(x.size() + y.size());
  z << x, y;
  return z;
}

Vector team_operator(const Game& game, const PerronWeights& p, const Vector& z) {
  const TeamConfig cfg = game.config();
  if (z.size() != cfg.m1 + cfg.m2) throw StructuralError("z has the wrong dimension");
  if (p.p1.size() != cfg.k1 || p.p2.size() != cfg.k2) {
    throw StructuralError("Perron weights do not match the team sizes");
  }
  const Vector x = z.head(cfg.m1);
  const Vector y = z.tail(cfg.m2);
  Vector fx = Vector::Zero(cfg.m1);
  for (int k = 0; k < cfg.k1; ++k) fx += p.p1(k) * game.mean_grad_x({Team::One, k}, x, y);
  Vector fy = Vector::Zero(cfg.m2);
  for (int k = 0; k < cfg.k2; ++k) fy += p.p2(k) * game.mean_grad_y({Team::Two, k}, x, y);
  return stack(fx, fy);
}

AffineOperator affine_operator(const Game& game, const PerronWeights& p) {
  if (!game.is_affine()) throw CapabilityError(game.name() + " is not an affine game");
  const TeamConfig cfg = game.config();
  const int m = cfg.m1 + cfg.m2;

  AffineOperator op;
  op.b = team_operator(game, p, Vector::Zero(m));
  op.h.resize(m, m);
  for (int j = 0; j < m; ++j) {
    op.h.col(j) = team_operator(game, p, Vector::Unit(m, j)) - op.b;
  }

  std::mt19937_64 gen(0x5eed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int probe = 0; probe < m + 1; ++probe) {
    Vector z(m);
    for (int i = 0; i < m; ++i) z(i) = coord(gen);
    const Vector f = team_operator(game, p, z);
    const double err = (f - (op.h * z + op.b)).cwiseAbs().maxCoeff();
    if (err > 1e-9 * (1.0 + f.cwiseAbs().maxCoeff())) {
      throw CapabilityError(game.name() + " declared affine but F is not affine (probe error " +
                            std::to_string(err) + ")");
    }
  }
  return op;
}

double monotonicity_constant(const Matrix& h) {
  const Matrix sym = 0.5 * (h + h.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigen-solve failed");
  return solver.eigenvalues().minCoeff();
}

NashPoint nash_oracle(const Matrix& h, const Vector& b, int m1) {
  if (h.rows() != h.cols() || h.rows() != b.size() || m1 < 1 || m1 >= h.rows()) {
    throw StructuralError("nash_oracle: H, b and M1 do not conform");
  }
  const double nu = monotonicity_constant(h);
  if (!(nu > 0.0)) {
    throw MonotonicityError("operator is not strongly monotone (lambda_min = " +
                            std::to_string(nu) + ")");
  }
  const Vector z = h.fullPivLu().solve(-b);
  const double residual = (h * z + b).norm();
  if (!(residual <= 1e-10 * std::max(1.0, b.norm()))) {
    throw NumericalError("Nash linear solve residual " + std::to_string(residual));
  }
  return {z.head(m1), z.tail(h.rows() - m1)};
}

double fd_gradient_check(const Game& game, const GamePoint& point, double h,
                         std::uint64_t noise_seed) {
  if (!(h > 0.0)) throw ArgumentError("finite-difference step must be positive");
  const TeamConfig cfg = game.config();
  double worst = 0.0;
  auto rel = [](double a, double d) {
    return std::abs(a - d) / std::max({1.0, std::abs(a), std::abs(d)});
  };
  for (Team team : {Team::One, Team::Two}) {
    for (int k = 0; k < cfg.agents(team); ++k) {
      const AgentRef agent{team, k};
      Stream stream = make_stream(noise_seed, 0, static_cast<std::uint64_t>(agent.global(cfg)),
                                  StreamPurpose::Probe);
      const NoiseDraw noise = game.sample_noise(agent, stream);
      const Vector gx = game.grad_x(agent, point.x, point.y, noise);
      const Vector gy = game.grad_y(agent, point.x, point.y, noise);
      for (int i = 0; i < cfg.m1; ++i) {
        Vector xp = point.x, xm = point.x;
        xp(i) += h;
        xm(i) -= h;
        const double d = (game.loss(agent, xp, point.y, noise) -
                          game.loss(agent, xm, point.y, noise)) / (2.0 * h);
        worst = std::max(worst, rel(gx(i), d));
      }
      for (int i = 0; i < cfg.m2; ++i) {
        Vector yp = point.y, ym = point.y;
        yp(i) += h;
        ym(i) -= h;
        const double d = (game.loss(agent, point.x, yp, noise) -
                          game.loss(agent, point.x, ym, noise)) / (2.0 * h);
        worst = std::max(worst, rel(gy(i), d));
      }
    }
  }
  return worst;
}

double gradient_disagreement(const Game& game, const PerronWeights& p, const Vector& z) {
  const TeamConfig cfg = game.config();
  const Vector x = z.head(cfg.m1);
  const Vector y = z.tail(cfg.m2);
  double worst = 0.0;
  for (Team team : {Team::One, Team::Two}) {
    const Vector& w = p.of(team);
    Vector team_gx = Vector::Zero(cfg.m1);
    Vector team_gy = Vector::Zero(cfg.m2);
    std::vector<Vector> gxs, gys;
    for (int k = 0; k < cfg.agents(team); ++k) {
      gxs.push_back(game.mean_grad_x({team, k}, x, y));
      gys.push_back(game.mean_grad_y({team, k}, x, y));
      team_gx += w(k) * gxs.back();
      team_gy += w(k) * gys.back();
    }
    for (int k = 0; k < cfg.agents(team); ++k) {
      worst = std::max({worst, (gxs[k] - team_gx).norm(), (gys[k] - team_gy).norm()});
    }
  }
  return worst;
}

nlohmann::json GameConstants::to_json() const {
  nlohmann::json j{{"lipschitz", lipschitz},
                   {"disagreement", disagreement},
                   {"noise_std", noise_std},
                   {"box_halfwidth", box_halfwidth}};
  j["nu"] = std::isnan(nu) ? nlohmann::json(nullptr) : nlohmann::json(nu);
  return j;
}

GameConstants estimate_constants(const Game& game, const PerronWeights& p, double box_halfwidth,
                                 std::uint64_t seed, int samples) {
  const TeamConfig cfg = game.config();
  const int m = cfg.m1 + cfg.m2;
  GameConstants out;
  out.box_halfwidth = box_halfwidth;
  if (game.is_affine()) out.nu = monotonicity_constant(affine_operator(game, p).h);

  std::mt19937_64 gen(splitmix64(seed ^ 0xc0ffeeULL));
  std::uniform_real_distribution<double> coord(-box_halfwidth, box_halfwidth);
  auto random_point = [&] {
    Vector z(m);
    for (int i = 0; i < m; ++i) z(i) = coord(gen);
    return z;
  };

  // Box corners carry the extreme disagreement for affine games; add them when
  // there are few enough.
  if (m <= 12) {
    for (int mask = 0; mask < (1 << m); ++mask) {
      Vector z(m);
      for (int i = 0; i < m; ++i) z(i) = (mask >> i & 1) ? box_halfwidth : -box_halfwidth;
      out.disagreement = std::max(out.disagreement, gradient_disagreement(game, p, z));
    }
  }
  for (int s = 0; s < samples; ++s) {
    out.disagreement = std::max(out.disagreement, gradient_disagreement(game, p, random_point()));
  }

  for (int s = 0; s < samples; ++s) {
    const Vector z1 = random_point();
    const Vector z2 = random_point();
    const Vector x1 = z1.head(cfg.m1), y1 = z1.tail(cfg.m2);
    const Vector x2 = z2.head(cfg.m1), y2 = z2.tail(cfg.m2);
    const double dist = (x1 - x2).norm() + (y1 - y2).norm();
    if (dist <= 0.0) continue;
    for (Team team : {Team::One, Team::Two}) {
      for (int k = 0; k < cfg.agents(team); ++k) {
        const AgentRef a{team, k};
        const double dx = (game.mean_grad_x(a, x1, y1) - game.mean_grad_x(a, x2, y2)).norm();
        const double dy = (game.mean_grad_y(a, x1, y1) - game.mean_grad_y(a, x2, y2)).norm();
        out.lipschitz = std::max(out.lipschitz, std::max(dx, dy) / dist);
      }
    }
  }

  const Vector z0 = random_point();
  const Vector x0 = z0.head(cfg.m1), y0 = z0.tail(cfg.m2);
  const int draws = 256;
  for (Team team : {Team::One, Team::Two}) {
    for (int k = 0; k < cfg.agents(team); ++k) {
      const AgentRef a{team, k};
      const Vector gx = game.mean_grad_x(a, x0, y0);
      const Vector gy = game.mean_grad_y(a, x0, y0);
      double sx = 0.0, sy = 0.0;
      for (int d = 0; d < draws; ++d) {
        Stream stream = make_stream(seed, static_cast<std::uint64_t>(d),
                                    static_cast<std::uint64_t>(a.global(cfg)),
                                    StreamPurpose::Probe);
        const NoiseDraw noise = game.sample_noise(a, stream);
        sx += (game.grad_x(a, x0, y0, noise) - gx).squaredNorm();
        sy += (game.grad_y(a, x0, y0, noise) - gy).squaredNorm();
      }
      out.noise_std = std::max(out.noise_std, std::sqrt(std::max(sx, sy) / draws));
    }
  }
  return out;
}

}  // namespace compnet
