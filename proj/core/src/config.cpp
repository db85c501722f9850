#include "compnet/config.hpp"

#include <fstream>

#include "compnet/cournot.hpp"
#include "compnet/errors.hpp"
#include "compnet/quadratic.hpp"
#include "compnet/wgan.hpp"

namespace compnet {

namespace fs = std::filesystem;
using nlohmann::json;

Matrix matrix_from_rows(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ConfigError("matrix rows must be a non-empty array");
  const auto n = rows.size();
  const auto m = rows.front().is_array() ? rows.front().size() : 0;
  if (m == 0) throw ConfigError("matrix rows must be non-empty arrays");
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != m) throw ConfigError("matrix rows differ in length");
    for (std::size_t j = 0; j < m; ++j) {
      if (!row[j].is_number()) throw ConfigError("matrix entries must be numbers");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return out;
}

json matrix_to_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

Matrix matrix_source(const json& src, const fs::path& base, Team team) {
  if (!src.is_object()) throw ConfigError("a matrix source must be an object");
  if (src.contains("rows")) return matrix_from_rows(src.at("rows"));
  if (src.contains("file")) {
    fs::path p = src.at("file").get<std::string>();
    if (p.is_relative()) p = base / p;
    return read_matrix_file(p);
  }
  if (src.contains("averaging")) {
    return build_averaging_matrix(team, matrix_from_rows(src.at("averaging"))).entries();
  }
  if (src.contains("incoming")) return normalize_columns(matrix_from_rows(src.at("incoming")));
  throw ConfigError("matrix source needs one of rows, file, averaging, incoming");
}

TopologySpec parse_topology(const json& t, const fs::path& base) {
  if (!t.is_object()) throw ConfigError("'topology' must be an object");
  TopologySpec spec;
  if (t.contains("preset")) {
    if (t.at("preset") != "cournot") throw ConfigError("unknown topology preset");
    const CournotMatrices m = paper_cournot_matrices();
    spec.a1 = m.a1.entries();
    spec.a2 = m.a2.entries();
    spec.c_weak = m.c_weak.full();
    spec.c_strong = m.c_strong.full();
  } else {
    if (!t.contains("a1") || !t.contains("a2")) throw ConfigError("topology needs a1 and a2");
    spec.a1 = matrix_source(t.at("a1"), base, Team::One);
    spec.a2 = matrix_source(t.at("a2"), base, Team::Two);
  }
  if (spec.a1.rows() != spec.a1.cols() || spec.a2.rows() != spec.a2.cols()) {
    throw ConfigError("a1 and a2 must be square");
  }
  const auto cross = [&](const char* key) -> std::optional<Matrix> {
    if (!t.contains(key)) return std::nullopt;
    if (t.at(key) == "uniform") return uniform_bipartite_strong(spec.k1(), spec.k2()).full();
    return matrix_source(t.at(key), base, Team::One);
  };
  if (auto c = cross("c_weak")) spec.c_weak = std::move(c);
  if (auto c = cross("c_strong")) spec.c_strong = std::move(c);
  spec.c = cross("c");
  const int k = spec.k1() + spec.k2();
  for (const auto* c : {&spec.c, &spec.c_weak, &spec.c_strong}) {
    if (*c && ((*c)->rows() != k || (*c)->cols() != k)) {
      throw ConfigError("inference matrices must be K x K with K = K1 + K2");
    }
  }
  return spec;
}

InitMode parse_init(const std::string& s) {
  if (s == "zero") return InitMode::Zero;
  if (s == "game-default") return InitMode::GameDefault;
  throw ConfigError("init must be 'zero' or 'game-default'");
}

}  // namespace

Matrix read_matrix_file(const fs::path& path) {
  const json j = read_json(path);
  if (!j.is_object() || !j.contains("rows")) {
    throw ConfigError("'" + path.string() + "' has no \"rows\" field");
  }
  return matrix_from_rows(j.at("rows"));
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  if (!j.contains("game") || !j.at("game").is_object() || !j.at("game").contains("type")) {
    throw ConfigError("config needs a 'game' object with a 'type'");
  }
  cfg.game = j.at("game");
  if (!j.contains("topology")) throw ConfigError("config needs a 'topology'");
  cfg.topology = parse_topology(j.at("topology"), base_dir);

  cfg.algorithm = parse_algorithm(get_or<std::string>(j, "algorithm", "atc-itc"));
  cfg.mu = get_or(j, "mu", cfg.mu);
  cfg.iterations = get_or(j, "iterations", cfg.iterations);
  if (j.contains("seeds")) cfg.seeds = get_or(j, "seeds", cfg.seeds);
  if (cfg.seeds.empty()) throw ConfigError("'seeds' must not be empty");
  cfg.record_every = get_or(j, "record_every", cfg.record_every);
  if (j.contains("infer_cutoff") && !j.at("infer_cutoff").is_null()) {
    cfg.infer_cutoff = get_or<std::int64_t>(j, "infer_cutoff", 0);
  }
  cfg.init = parse_init(get_or<std::string>(j, "init", "zero"));
  cfg.steady_window = get_or(j, "steady_window", cfg.steady_window);
  if (!(cfg.steady_window > 0.0 && cfg.steady_window <= 1.0)) {
    throw ConfigError("steady_window must lie in (0, 1]");
  }
  cfg.output = get_or<std::string>(j, "output", "out");

  if (j.contains("sweep")) cfg.sweep_mus = get_or(j.at("sweep"), "mus", std::vector<double>{});
  if (j.contains("compare")) {
    const json& c = j.at("compare");
    for (const auto& name : get_or(c, "algorithms", std::vector<std::string>{})) {
      cfg.compare_algorithms.push_back(parse_algorithm(name));
    }
    cfg.compare_threshold = get_or(c, "threshold", cfg.compare_threshold);
  }
  cfg.step_config(cfg.seeds.front()).check();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  return from_json(read_json(path), path.parent_path());
}

StepConfig ExperimentConfig::step_config(std::uint64_t seed) const {
  return step_config(seed, algorithm, mu);
}

StepConfig ExperimentConfig::step_config(std::uint64_t seed, Algorithm alg, double step) const {
  StepConfig s;
  s.algorithm = alg;
  s.mu = step;
  s.iterations = iterations;
  s.seed = seed;
  s.infer_cutoff = infer_cutoff;
  s.record_every = record_every;
  s.init = init;
  return s;
}

InferenceMatrix inference_for(const TopologySpec& t, Algorithm algorithm) {
  const CrossMode mode = required_mode(algorithm);
  const std::optional<Matrix>& chosen =
      t.c ? t.c : (mode == CrossMode::Strong ? t.c_strong : t.c_weak);
  if (!chosen) {
    throw ConfigError(std::string("topology has no ") +
                      (mode == CrossMode::Strong ? "c_strong" : "c_weak") + " matrix for " +
                      to_string(algorithm));
  }
  return {*chosen, t.k1(), mode};
}

std::shared_ptr<const Game> build_game(const json& g, const TopologySpec& topology,
                                       const PerronWeights& weights) {
  const std::string type = g.at("type").get<std::string>();
  const int k1 = topology.k1();
  const int k2 = topology.k2();
  if (get_or(g, "k1", k1) != k1 || get_or(g, "k2", k2) != k2) {
    throw ConfigError("game team sizes disagree with the topology");
  }
  if (type == "cournot") {
    CournotParams p = CournotParams::paper();
    p.k1 = k1;
    p.k2 = k2;
    p.costs = get_or(g, "costs", p.costs);
    p.price_intercept = get_or(g, "price_intercept", p.price_intercept);
    p.price_slope = get_or(g, "price_slope", p.price_slope);
    p.noise_amplitude = get_or(g, "noise_amplitude", p.noise_amplitude);
    return std::make_shared<CournotGame>(std::move(p));
  }
  if (type == "quadratic") {
    QuadraticParams p;
    p.k1 = k1;
    p.k2 = k2;
    p.m1 = get_or(g, "m1", p.m1);
    p.m2 = get_or(g, "m2", p.m2);
    p.nu = get_or(g, "nu", p.nu);
    p.spectrum_spread = get_or(g, "spectrum_spread", p.spectrum_spread);
    p.coupling = get_or(g, "coupling", p.coupling);
    p.heterogeneity = get_or(g, "heterogeneity", p.heterogeneity);
    p.offset = get_or(g, "offset", p.offset);
    p.noise_std = get_or(g, "noise_std", p.noise_std);
    p.seed = get_or(g, "seed", p.seed);
    return std::make_shared<QuadraticGame>(p, weights);
  }
  if (type == "wgan") {
    WganParams p = WganParams::paper();
    p.k1 = k1;
    p.k2 = k2;
    p.hidden = get_or(g, "hidden", p.hidden);
    p.batch = get_or(g, "batch", p.batch);
    p.lambda_x = get_or(g, "lambda_x", p.lambda_x);
    p.lambda_y = get_or(g, "lambda_y", p.lambda_y);
    p.data_mean = get_or(g, "data_mean", p.data_mean);
    p.data_std = get_or(g, "data_std", p.data_std);
    p.init_scale = get_or(g, "init_scale", p.init_scale);
    p.quadrature_nodes = get_or(g, "quadrature_nodes", p.quadrature_nodes);
    return std::make_shared<WganGame>(p);
  }
  throw ConfigError("unknown game type '" + type + "' (cournot, quadratic, wgan)");
}

Experiment build_experiment(const ExperimentConfig& config, Algorithm algorithm) {
  const TopologySpec& t = config.topology;
  Network net{CombinationMatrix(Team::One, t.a1), CombinationMatrix(Team::Two, t.a2),
              inference_for(t, algorithm)};
  const PerronWeights weights = perron_weights(net.a1, net.a2);
  auto game = build_game(config.game, t, weights);

  Reference reference;
  if (game->is_affine()) {
    const AffineOperator op = affine_operator(*game, weights);
    reference.z_star = nash_oracle(op.h, op.b, game->config().m1).z();
  } else if (const auto* wgan = dynamic_cast<const WganGame*>(game.get())) {
    const double pi = wgan->params().data_mean;
    const double sigma = wgan->params().data_std;
    reference.error = [wgan, pi, sigma](const NetworkState& s) {
      double err = 0.0;
      for (Eigen::Index k = 0; k < s.x1.rows(); ++k) {
        const GeneratorMoments m = wgan->moments(s.x1.row(k).transpose());
        err += (m.mean - pi) * (m.mean - pi) + (m.stddev - sigma) * (m.stddev - sigma);
      }
      return err / static_cast<double>(s.x1.rows());
    };
  }
  return {std::move(game), std::move(net), weights, std::move(reference)};
}

}  // namespace compnet
