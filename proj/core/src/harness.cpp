#include "compnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "compnet/csv.hpp"
#include "compnet/errors.hpp"
#include "compnet/spectral.hpp"
#include "compnet/wgan.hpp"

namespace compnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr Field kSummaryFields[] = {Field::ConsensusError, Field::Mse, Field::GradNorm,
                                    Field::DNormSq};

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> try_steady(const Trajectory& t, Field f, double window) {
  try {
    return steady_state(t, f, window);
  } catch (const ArgumentError&) {
    return std::nullopt;
  }
}

Network network_for(const ExperimentConfig& config, Algorithm algorithm) {
  const TopologySpec& t = config.topology;
  return {CombinationMatrix(Team::One, t.a1), CombinationMatrix(Team::Two, t.a2),
          inference_for(t, algorithm)};
}

void require_valid(const ExperimentConfig& config, Algorithm algorithm) {
  const Network net = network_for(config, algorithm);
  const TeamConfig sizes{net.a1.size(), net.a2.size(), 1, 1};
  const ValidationReport report = validate_network(net, sizes, algorithm);
  if (!report.passed()) {
    throw ValidationError(std::string("network fails validation for ") + to_string(algorithm) +
                          ": " + report.to_json().dump());
  }
}

std::string seed_file(std::uint64_t seed) { return "seed_" + std::to_string(seed) + ".csv"; }

std::string trajectory_csv(const Trajectory& t, const TeamConfig& cfg) {
  std::ostringstream out;
  write_trajectory_csv(out, t, cfg.m1, cfg.m2);
  return out.str();
}

json run_header(const ExperimentConfig& config, Algorithm algorithm, double mu) {
  return {{"game", config.game},
          {"algorithm", to_string(algorithm)},
          {"mu", mu},
          {"iterations", config.iterations},
          {"record_every", config.record_every},
          {"steady_window", config.steady_window},
          {"infer_cutoff", config.infer_cutoff ? json(*config.infer_cutoff) : json(nullptr)}};
}

}  // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(guard);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

json validate_experiment(const ExperimentConfig& config) {
  const Network net = network_for(config, config.algorithm);
  const TeamConfig sizes{net.a1.size(), net.a2.size(), 1, 1};
  const ValidationReport report = validate_network(net, sizes, config.algorithm);
  json out = report.to_json();
  out["algorithm"] = to_string(config.algorithm);
  out["required_mode"] = to_string(required_mode(config.algorithm));
  bool passed = report.passed();

  json game = {{"type", config.game.at("type")}};
  if (passed) {
    const PerronWeights p = perron_weights(net.a1, net.a2);
    out["perron"] = {{"p1", std::vector<double>(p.p1.data(), p.p1.data() + p.p1.size())},
                     {"p2", std::vector<double>(p.p2.data(), p.p2.data() + p.p2.size())}};
    const auto g = build_game(config.game, config.topology, p);
    if (g->is_affine()) {
      const AffineOperator op = affine_operator(*g, p);
      const double nu = monotonicity_constant(op.h);
      game["nu"] = nu;
      game["strongly_monotone"] = nu > 0.0;
      passed = passed && nu > 0.0;
    } else {
      game["strongly_monotone"] = nullptr;
    }
    if (config.algorithm == Algorithm::AtcItcPartialObs) {
      game["adversary_oracle"] = g->has_adversary_oracle();
      passed = passed && g->has_adversary_oracle();
    }
  }
  out["game"] = game;
  out["passed"] = passed;
  return out;
}

json spectral_experiment(const ExperimentConfig& config) {
  const Network net = network_for(config, config.algorithm);
  const SpectralReport report = spectral_report(net.a1, net.a2, net.c);
  json out = report.to_json();
  out["algorithm"] = to_string(config.algorithm);
  out["mu"] = config.mu;
  json transient;
  for (const auto& [name, lambda] :
       {std::pair{"bx", report.subdominant_bx}, std::pair{"by", report.subdominant_by}}) {
    if (lambda > 0.0 && lambda < 1.0) {
      transient[name] = predict_transient(config.mu, lambda);
    } else {
      transient[name] = nullptr;
    }
  }
  out["predicted_transient"] = transient;
  return out;
}

json summarize(const Trajectory& trajectory, double window) {
  json steady = json::object();
  for (Field f : kSummaryFields) steady[to_string(f)] = optional_json(try_steady(trajectory, f, window));
  json out = {{"records", trajectory.records.size()},
              {"diverged", trajectory.diverged_at.has_value()},
              {"diverged_at", trajectory.diverged_at ? json(*trajectory.diverged_at) : json(nullptr)},
              {"steady_state", steady}};
  if (!trajectory.records.empty()) {
    const Record& first = trajectory.records.front();
    const Record& last = trajectory.records.back();
    out["initial"] = {{"grad_norm", first.grad_norm}, {"mse", optional_json(first.mse)}};
    out["final"] = {{"iteration", last.iteration},
                    {"consensus_err", last.consensus_error},
                    {"mse", optional_json(last.mse)},
                    {"grad_norm", last.grad_norm}};
  }
  return out;
}

std::optional<std::int64_t> first_hit(const Trajectory& trajectory, double threshold) {
  for (const Record& r : trajectory.records) {
    if (r.mse && *r.mse <= threshold) return r.iteration;
  }
  return std::nullopt;
}

json run_experiment(const ExperimentConfig& config, const fs::path& out) {
  require_valid(config, config.algorithm);
  const Experiment ex = build_experiment(config, config.algorithm);
  const TeamConfig cfg = ex.game->config();
  const auto* wgan = dynamic_cast<const WganGame*>(ex.game.get());

  std::vector<json> per_seed(config.seeds.size());
  parallel_for(config.seeds.size(), [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    const RunResult res =
        run(config.step_config(seed), *ex.game, ex.network, ex.reference, /*keep_partial=*/true);
    write_file_atomic(out / seed_file(seed), trajectory_csv(res.trajectory, cfg));
    json s = summarize(res.trajectory, config.steady_window);
    s["seed"] = seed;
    s["csv"] = seed_file(seed);
    if (wgan && !res.trajectory.records.empty()) {
      const GeneratorMoments m = wgan->moments(res.trajectory.records.back().x_c);
      s["moments"] = {{"pi_hat", m.mean}, {"sigma_hat", m.stddev}};
    }
    per_seed[i] = std::move(s);
  });

  json summary = run_header(config, config.algorithm, config.mu);
  json means = json::object();
  for (Field f : kSummaryFields) {
    double sum = 0.0;
    int n = 0;
    for (const json& s : per_seed) {
      const json& v = s["steady_state"][to_string(f)];
      if (!s["diverged"].get<bool>() && v.is_number()) {
        sum += v.get<double>();
        ++n;
      }
    }
    means[to_string(f)] = n ? json(sum / n) : json(nullptr);
  }
  int diverged = 0;
  for (const json& s : per_seed) diverged += s["diverged"].get<bool>() ? 1 : 0;
  summary["runs"] = per_seed;
  summary["diverged_runs"] = diverged;
  summary["mean_over_seeds"] = means;
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  return summary;
}

json sweep_experiment(const ExperimentConfig& config, const fs::path& out) {
  if (config.sweep_mus.empty()) throw ConfigError("sweep needs a non-empty sweep.mus list");
  for (double mu : config.sweep_mus) {
    if (!(mu > 0.0)) throw ConfigError("sweep step sizes must be positive");
  }
  require_valid(config, config.algorithm);
  const Experiment ex = build_experiment(config, config.algorithm);

  const std::size_t n_seeds = config.seeds.size();
  const std::size_t n_cells = config.sweep_mus.size() * n_seeds;
  struct Cell {
    std::optional<std::int64_t> diverged_at;
    std::map<Field, std::optional<double>> steady;
  };
  std::vector<Cell> cells(n_cells);
  parallel_for(n_cells, [&](std::size_t i) {
    const double mu = config.sweep_mus[i / n_seeds];
    const std::uint64_t seed = config.seeds[i % n_seeds];
    const RunResult res = run(config.step_config(seed, config.algorithm, mu), *ex.game, ex.network,
                              ex.reference, /*keep_partial=*/true);
    Cell& c = cells[i];
    c.diverged_at = res.trajectory.diverged_at;
    for (Field f : kSummaryFields) c.steady[f] = try_steady(res.trajectory, f, config.steady_window);
  });

  std::string table = "mu,seed,diverged_at,consensus_err,mse,grad_norm,d_norm_sq\n";
  std::vector<std::map<Field, std::optional<double>>> means(config.sweep_mus.size());
  std::vector<int> diverged(config.sweep_mus.size(), 0);
  for (std::size_t m = 0; m < config.sweep_mus.size(); ++m) {
    std::map<Field, std::pair<double, int>> acc;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const Cell& c = cells[m * n_seeds + s];
      std::vector<std::string> row{format_double(config.sweep_mus[m]),
                                   std::to_string(config.seeds[s]),
                                   c.diverged_at ? std::to_string(*c.diverged_at) : ""};
      for (Field f : kSummaryFields) row.push_back(format_optional(c.steady.at(f)));
      table += csv_row(row) + "\n";
      if (c.diverged_at) {
        ++diverged[m];
        continue;
      }
      for (Field f : kSummaryFields) {
        if (const auto v = c.steady.at(f)) {
          acc[f].first += *v;
          acc[f].second += 1;
        }
      }
    }
    for (Field f : kSummaryFields) {
      const auto it = acc.find(f);
      means[m][f] = it != acc.end() && it->second.second > 0
                        ? std::optional<double>(it->second.first / it->second.second)
                        : std::nullopt;
    }
  }
  write_file_atomic(out / "sweep.csv", table);

  std::string ratios = "mu_a,mu_b,consensus_err_ratio,mse_ratio,grad_norm_ratio,d_norm_sq_ratio\n";
  json ratio_json = json::array();
  for (std::size_t m = 0; m + 1 < config.sweep_mus.size(); ++m) {
    std::vector<std::string> row{format_double(config.sweep_mus[m]),
                                 format_double(config.sweep_mus[m + 1])};
    json r = {{"mu_a", config.sweep_mus[m]}, {"mu_b", config.sweep_mus[m + 1]}};
    for (Field f : kSummaryFields) {
      const auto a = means[m].at(f);
      const auto b = means[m + 1].at(f);
      std::optional<double> ratio;
      if (a && b && *b != 0.0) ratio = *a / *b;
      row.push_back(format_optional(ratio));
      r[std::string(to_string(f)) + "_ratio"] = optional_json(ratio);
    }
    ratios += csv_row(row) + "\n";
    ratio_json.push_back(std::move(r));
  }
  write_file_atomic(out / "ratios.csv", ratios);

  json summary = run_header(config, config.algorithm, config.mu);
  summary.erase("mu");
  json per_mu = json::array();
  for (std::size_t m = 0; m < config.sweep_mus.size(); ++m) {
    json entry = {{"mu", config.sweep_mus[m]}, {"diverged_runs", diverged[m]}};
    for (Field f : kSummaryFields) entry[to_string(f)] = optional_json(means[m].at(f));
    per_mu.push_back(std::move(entry));
  }
  summary["seeds"] = config.seeds;
  summary["per_mu"] = per_mu;
  summary["ratios"] = ratio_json;
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  return summary;
}

json compare_experiment(const ExperimentConfig& config, const fs::path& out) {
  if (config.compare_algorithms.size() < 2) {
    throw ConfigError("compare needs at least two entries in compare.algorithms");
  }
  std::vector<Experiment> experiments;
  for (Algorithm a : config.compare_algorithms) {
    require_valid(config, a);
    experiments.push_back(build_experiment(config, a));
  }
  if (!experiments.front().reference.z_star && !experiments.front().reference.error) {
    throw ConfigError("compare needs a game with an mse reference");
  }

  const std::size_t n_alg = config.compare_algorithms.size();
  const std::size_t n_seeds = config.seeds.size();
  struct Cell {
    std::optional<std::int64_t> hit;
    std::optional<std::int64_t> diverged_at;
    std::optional<double> steady_mse;
    std::optional<double> steady_grad;
  };
  std::vector<Cell> cells(n_alg * n_seeds);
  parallel_for(cells.size(), [&](std::size_t i) {
    const std::size_t a = i / n_seeds;
    const std::uint64_t seed = config.seeds[i % n_seeds];
    const Experiment& ex = experiments[a];
    const RunResult res =
        run(config.step_config(seed, config.compare_algorithms[a], config.mu), *ex.game,
            ex.network, ex.reference, /*keep_partial=*/true);
    cells[i] = {first_hit(res.trajectory, config.compare_threshold), res.trajectory.diverged_at,
                try_steady(res.trajectory, Field::Mse, config.steady_window),
                try_steady(res.trajectory, Field::GradNorm, config.steady_window)};
  });

  std::string table = "seed,algorithm,iterations_to_threshold,diverged_at,steady_mse,steady_grad_norm\n";
  for (std::size_t s = 0; s < n_seeds; ++s) {
    for (std::size_t a = 0; a < n_alg; ++a) {
      const Cell& c = cells[a * n_seeds + s];
      table += csv_row({std::to_string(config.seeds[s]), to_string(config.compare_algorithms[a]),
                        c.hit ? std::to_string(*c.hit) : "",
                        c.diverged_at ? std::to_string(*c.diverged_at) : "",
                        format_optional(c.steady_mse), format_optional(c.steady_grad)}) +
               "\n";
    }
  }
  write_file_atomic(out / "compare.csv", table);

  json summary = run_header(config, config.compare_algorithms.front(), config.mu);
  summary.erase("algorithm");
  summary["threshold"] = config.compare_threshold;
  summary["seeds"] = config.seeds;
  json algs = json::array();
  for (std::size_t a = 0; a < n_alg; ++a) {
    int reached = 0, diverged = 0;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      reached += cells[a * n_seeds + s].hit ? 1 : 0;
      diverged += cells[a * n_seeds + s].diverged_at ? 1 : 0;
    }
    algs.push_back({{"algorithm", to_string(config.compare_algorithms[a])},
                    {"reached_threshold", reached},
                    {"diverged", diverged}});
  }
  summary["algorithms"] = algs;
  // Seeds where the first algorithm hits the threshold strictly earlier.
  json wins = json::array();
  for (std::size_t b = 1; b < n_alg; ++b) {
    int count = 0;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const auto& first = cells[s].hit;
      const auto& other = cells[b * n_seeds + s].hit;
      if (first && (!other || *first < *other)) ++count;
    }
    wins.push_back({{"versus", to_string(config.compare_algorithms[b])},
                    {"strictly_faster_seeds", count}});
  }
  summary["first_vs_others"] = wins;
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  return summary;
}

}  // namespace compnet
