#include "compnet/diffusion.hpp"

#include "compnet/errors.hpp"

namespace compnet {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "atc-itc") return Algorithm::AtcItc;
  if (name == "atc-c") return Algorithm::AtcC;
  if (name == "cd") return Algorithm::Cd;
  if (name == "atc-itc-po") return Algorithm::AtcItcPartialObs;
  throw ConfigError("unknown algorithm '" + name + "' (atc-itc, atc-c, cd, atc-itc-po)");
}

const char* to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::AtcItc: return "atc-itc";
    case Algorithm::AtcC: return "atc-c";
    case Algorithm::Cd: return "cd";
    case Algorithm::AtcItcPartialObs: return "atc-itc-po";
  }
  return "?";
}

CrossMode required_mode(Algorithm a) noexcept {
  return a == Algorithm::AtcC ? CrossMode::Strong : CrossMode::Weak;
}

ValidationReport validate_network(const Network& net, const TeamConfig& cfg, Algorithm algorithm) {
  ValidationReport report("network");
  ValidationReport a1 = validate_combination_matrix(net.a1, cfg);
  ValidationReport a2 = validate_combination_matrix(net.a2, cfg);
  ValidationReport c = validate_inference_matrix(net.c.with_mode(required_mode(algorithm)), cfg);
  for (auto* part : {&a1, &a2, &c}) {
    for (const Check& check : part->checks()) {
      report.add(part->subject() + "." + check.name, check.passed, check.detail);
    }
  }
  return report;
}

std::vector<NoiseDraw> draw_noise(const Game& game, std::uint64_t seed, std::int64_t iteration,
                                  StreamPurpose purpose) {
  const TeamConfig cfg = game.config();
  std::vector<NoiseDraw> draws;
  draws.reserve(static_cast<std::size_t>(cfg.total_agents()));
  for (int g = 0; g < cfg.total_agents(); ++g) {
    const AgentRef agent = g < cfg.k1 ? AgentRef{Team::One, g} : AgentRef{Team::Two, g - cfg.k1};
    Stream stream = make_stream(seed, static_cast<std::uint64_t>(iteration),
                                static_cast<std::uint64_t>(g), purpose);
    draws.push_back(game.sample_noise(agent, stream));
  }
  return draws;
}

namespace {

enum class Inference { Surrogate, Oracle, Forward, CopyOnly };

void check_shapes(const NetworkState& s, const Game& game, const Network& net,
                  const std::vector<NoiseDraw>& noise) {
  const TeamConfig cfg = game.config();
  const bool ok = s.x1.rows() == cfg.k1 && s.x1.cols() == cfg.m1 && s.y1.rows() == cfg.k1 &&
                  s.y1.cols() == cfg.m2 && s.x2.rows() == cfg.k2 && s.x2.cols() == cfg.m1 &&
                  s.y2.rows() == cfg.k2 && s.y2.cols() == cfg.m2 && net.a1.size() == cfg.k1 &&
                  net.a2.size() == cfg.k2 && net.c.k1() == cfg.k1 && net.c.k2() == cfg.k2 &&
                  static_cast<int>(noise.size()) == cfg.total_agents();
  if (!ok) throw StructuralError("state, network and game dimensions do not conform");
}

NetworkState advance(const NetworkState& s, const Game& game, const Network& net, double mu,
                     const std::vector<NoiseDraw>& noise, Inference mode) {
  check_shapes(s, game, net, noise);
  if (mode == Inference::Oracle && !game.has_adversary_oracle()) {
    throw CapabilityError(game.name() + " has no adversary-gradient oracle");
  }
  const int k1 = static_cast<int>(s.x1.rows());
  const int k2 = static_cast<int>(s.y2.rows());
  const bool needs_cross = mode == Inference::Surrogate || mode == Inference::Oracle;

  Matrix g1x(s.x1.rows(), s.x1.cols());
  Matrix g1y(s.y1.rows(), s.y1.cols());
  for (int k = 0; k < k1; ++k) {
    const AgentRef agent{Team::One, k};
    const Vector x = s.x1.row(k).transpose();
    const Vector y = s.y1.row(k).transpose();
    const NoiseDraw& xi = noise[static_cast<std::size_t>(k)];
    g1x.row(k) = game.grad_x(agent, x, y, xi).transpose();
    if (mode == Inference::Surrogate) {
      g1y.row(k) = -game.grad_y(agent, x, y, xi).transpose();
    } else if (mode == Inference::Oracle) {
      g1y.row(k) = game.adversary_grad(agent, x, y, xi).transpose();
    }
  }
  Matrix g2y(s.y2.rows(), s.y2.cols());
  Matrix g2x(s.x2.rows(), s.x2.cols());
  for (int r = 0; r < k2; ++r) {
    const AgentRef agent{Team::Two, r};
    const Vector x = s.x2.row(r).transpose();
    const Vector y = s.y2.row(r).transpose();
    const NoiseDraw& xi = noise[static_cast<std::size_t>(k1 + r)];
    g2y.row(r) = game.grad_y(agent, x, y, xi).transpose();
    if (mode == Inference::Surrogate) {
      g2x.row(r) = -game.grad_x(agent, x, y, xi).transpose();
    } else if (mode == Inference::Oracle) {
      g2x.row(r) = game.adversary_grad(agent, x, y, xi).transpose();
    }
  }

  NetworkState next;
  next.x1 = net.a1.entries().transpose() * (s.x1 - mu * g1x);
  next.y2 = net.a2.entries().transpose() * (s.y2 - mu * g2y);

  const Matrix& c = net.c.full();
  const auto c1 = c.topLeftCorner(k1, k1);
  const auto c12 = c.topRightCorner(k1, k2);
  const auto c21 = c.bottomLeftCorner(k2, k1);
  const auto c2 = c.bottomRightCorner(k2, k2);
  if (mode == Inference::CopyOnly) {
    next.y1 = c21.transpose() * next.y2;
    next.x2 = c12.transpose() * next.x1;
  } else if (needs_cross) {
    next.y1 = c21.transpose() * next.y2 + c1.transpose() * (s.y1 - mu * g1y);
    next.x2 = c12.transpose() * next.x1 + c2.transpose() * (s.x2 - mu * g2x);
  } else {
    next.y1 = c21.transpose() * next.y2 + c1.transpose() * s.y1;
    next.x2 = c12.transpose() * next.x1 + c2.transpose() * s.x2;
  }
  return next;
}

}  // namespace

NetworkState step_atc_itc(const NetworkState& state, const Game& game, const Network& net,
                          double mu, const std::vector<NoiseDraw>& noise, bool infer) {
  return advance(state, game, net, mu, noise, infer ? Inference::Surrogate : Inference::Forward);
}

NetworkState step_atc_c(const NetworkState& state, const Game& game, const Network& net,
                        double mu, const std::vector<NoiseDraw>& noise) {
  return advance(state, game, net, mu, noise, Inference::CopyOnly);
}

NetworkState step_cd(const NetworkState& state, const Game& game, const Network& net, double mu,
                     const std::vector<NoiseDraw>& noise) {
  return advance(state, game, net, mu, noise, Inference::Forward);
}

NetworkState step_atc_itc_po(const NetworkState& state, const Game& game, const Network& net,
                             double mu, const std::vector<NoiseDraw>& noise, bool infer) {
  if (!game.has_adversary_oracle()) {
    throw CapabilityError(game.name() + " has no adversary-gradient oracle");
  }
  return advance(state, game, net, mu, noise, infer ? Inference::Oracle : Inference::Forward);
}

NetworkState step(Algorithm algorithm, const NetworkState& state, const Game& game,
                  const Network& net, double mu, const std::vector<NoiseDraw>& noise, bool infer) {
  switch (algorithm) {
    case Algorithm::AtcItc: return step_atc_itc(state, game, net, mu, noise, infer);
    case Algorithm::AtcC: return step_atc_c(state, game, net, mu, noise);
    case Algorithm::Cd: return step_cd(state, game, net, mu, noise);
    case Algorithm::AtcItcPartialObs: return step_atc_itc_po(state, game, net, mu, noise, infer);
  }
  throw ArgumentError("unknown algorithm");
}

void StepConfig::check() const {
  if (!(mu > 0.0)) throw ConfigError("mu must be positive");
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
  if (record_every < 1) throw ConfigError("record_every must be >= 1");
}

std::optional<double> Reference::evaluate(const NetworkState& state, const Vector& z_c) const {
  if (error) return error(state);
  if (z_star) return (z_c - *z_star).squaredNorm();
  return std::nullopt;
}

NetworkState initial_state(const Game& game, InitMode mode, std::uint64_t seed) {
  const TeamConfig cfg = game.config();
  if (mode == InitMode::Zero) return NetworkState::zeros(cfg);
  return NetworkState::consensus(cfg, game.initial_strategy(Team::One, seed),
                                 game.initial_strategy(Team::Two, seed));
}

double mean_grad_norm(const NetworkState& state, const Game& game, std::uint64_t seed,
                      std::int64_t iteration) {
  const TeamConfig cfg = game.config();
  const auto draws = draw_noise(game, seed, iteration, StreamPurpose::Metrics);
  double total = 0.0;
  for (int g = 0; g < cfg.total_agents(); ++g) {
    const bool one = g < cfg.k1;
    const AgentRef agent = one ? AgentRef{Team::One, g} : AgentRef{Team::Two, g - cfg.k1};
    const Vector x = (one ? state.x1.row(g) : state.x2.row(agent.index)).transpose();
    const Vector y = (one ? state.y1.row(g) : state.y2.row(agent.index)).transpose();
    const NoiseDraw& xi = draws[static_cast<std::size_t>(g)];
    total += game.grad_x(agent, x, y, xi).norm() + game.grad_y(agent, x, y, xi).norm();
  }
  return total / cfg.total_agents();
}

RunResult run(const StepConfig& config, const Game& game, const Network& net,
              const Reference& reference, bool keep_partial) {
  config.check();
  const TeamConfig cfg = game.config();
  const ValidationReport report = validate_network(net, cfg, config.algorithm);
  if (!report.passed()) {
    std::string failed;
    for (const Check& c : report.checks()) {
      if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    throw ValidationError("network fails validation for " + std::string(to_string(config.algorithm)) +
                          ": " + failed);
  }
  if (config.algorithm == Algorithm::AtcItcPartialObs && !game.has_adversary_oracle()) {
    throw CapabilityError(game.name() + " has no adversary-gradient oracle");
  }
  const PerronWeights p = perron_weights(net.a1, net.a2);

  RunResult result{{}, initial_state(game, config.init, config.seed)};
  NetworkState& state = result.final_state;
  auto& records = result.trajectory.records;
  records.reserve(static_cast<std::size_t>(config.iterations / config.record_every + 1));

  const auto record = [&](std::int64_t i, const Centroids& cc, std::optional<double> d) {
    Record r;
    r.iteration = i;
    r.x_c = cc.x_c;
    r.y_c = cc.y_c;
    r.consensus_error = consensus_error(state, cc.x_c, cc.y_c);
    r.mse = reference.evaluate(state, cc.z());
    r.grad_norm = mean_grad_norm(state, game, config.seed, i);
    r.d_norm_sq = d;
    records.push_back(std::move(r));
  };

  record(0, centroids(state, p), std::nullopt);
  for (std::int64_t i = 1; i <= config.iterations; ++i) {
    const bool recorded = i % config.record_every == 0;
    const bool infer = !config.infer_cutoff || i <= *config.infer_cutoff;
    std::optional<Vector> z_prev;
    if (recorded) z_prev = centroids(state, p).z();

    NetworkState next =
        step(config.algorithm, state, game, net, config.mu, draw_noise(game, config.seed, i), infer);
    if (!next.all_finite() || next.max_abs() > kDivergenceBound) {
      if (!keep_partial) throw DivergenceError(i);
      result.trajectory.diverged_at = i;
      return result;
    }
    state = std::move(next);

    if (recorded) {
      const Centroids cc = centroids(state, p);
      const Vector f_prev = team_operator(game, p, *z_prev);
      record(i, cc, perturbation_diag(*z_prev, cc.z(), config.mu, f_prev));
    }
  }
  return result;
}

}  // namespace compnet
