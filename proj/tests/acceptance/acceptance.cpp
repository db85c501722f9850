#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "compnet/config.hpp"
#include "compnet/cournot.hpp"
#include "compnet/diffusion.hpp"
#include "compnet/harness.hpp"
#include "compnet/metrics.hpp"
#include "compnet/quadratic.hpp"
#include "compnet/spectral.hpp"
#include "compnet/wgan.hpp"

using namespace compnet;
namespace fs = std::filesystem;

namespace {

const fs::path kPresets = COMPNET_PRESETS_DIR;

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig cournot_preset() { return ExperimentConfig::load(kPresets / "cournot_paper.json"); }
ExperimentConfig wgan_preset() { return ExperimentConfig::load(kPresets / "wgan_paper.json"); }

// The preset's ATC-ITC flavour for Cournot uses the adversary oracle.
constexpr Algorithm kCournotItc = Algorithm::AtcItcPartialObs;

Verdict criterion1() {
  const auto m = paper_cournot_matrices();
  const TeamConfig cfg{3, 3, 3, 3};
  const bool a1 = validate_combination_matrix(m.a1, cfg).passed();
  const bool a2 = validate_combination_matrix(m.a2, cfg).passed();
  const bool weak_ok = validate_inference_matrix(m.c_weak, cfg).passed();
  const bool weak_as_strong = validate_inference_matrix(m.c_weak.with_mode(CrossMode::Strong), cfg).passed();
  const bool strong_ok = validate_inference_matrix(m.c_strong, cfg).passed();
  return {a1 && a2 && weak_ok && !weak_as_strong && strong_ok,
          fmt("A1=%d A2=%d C_weak(weak)=%d C_weak(strong)=%d C_strong=%d", a1, a2, weak_ok,
              weak_as_strong, strong_ok)};
}

Verdict criterion2() {
  const auto m = paper_cournot_matrices();
  const Matrix bx = build_bx(m.a1, m.c_weak.c12(), m.c_weak.c2());
  const Matrix by = build_by(m.a2, m.c_weak.c21(), m.c_weak.c1());
  const auto col_defect = [](const Matrix& b) {
    return (b.colwise().sum().array() - 1.0).abs().maxCoeff();
  };
  const SpectralReport r = spectral_report(m.a1, m.a2, m.c_weak);
  const double dx = col_defect(bx), dy = col_defect(by);
  const double px = perron_property_check(bx, perron_vector(m.a1));
  const double py = perron_property_check(by, perron_vector(m.a2));
  const bool ok = dx <= 1e-12 && dy <= 1e-12 && px <= 1e-10 && py <= 1e-10 && r.subdominant_bx < 1 &&
                  r.subdominant_by < 1 && r.rho_c1 < 1 && r.rho_c2 < 1;
  return {ok, fmt("col_defect=(%.1e,%.1e) perron=(%.1e,%.1e) lambda2=(%.4f,%.4f) rho_c=(%.4f,%.4f)", dx,
                  dy, px, py, r.subdominant_bx, r.subdominant_by, r.rho_c1, r.rho_c2)};
}

Verdict criterion3() {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto rv = [&](int d) { return Vector(Vector::NullaryExpr(d, [&] { return n(gen); })); };
  const CournotGame cournot(CournotParams::paper());
  const WganGame wgan(WganParams::paper());
  double worst_c = 0.0, worst_w = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto cc = cournot.config();
    worst_c = std::max(worst_c, fd_gradient_check(cournot, {rv(cc.m1), rv(cc.m2)}, 1e-6, i));
    const auto wc = wgan.config();
    worst_w = std::max(worst_w, fd_gradient_check(wgan, {rv(wc.m1), rv(wc.m2)}, 1e-6, i));
  }
  return {worst_c < 1e-7 && worst_w < 1e-5, fmt("cournot=%.2e wgan=%.2e", worst_c, worst_w)};
}

Verdict criterion4() {
  ExperimentConfig cfg = cournot_preset();
  cfg.game["noise_amplitude"] = 0.0;
  std::string detail;
  bool ok = true;
  for (Algorithm a : {Algorithm::AtcC, kCournotItc}) {
    const Experiment ex = build_experiment(cfg, a);
    const Vector& z = *ex.reference.z_star;
    const Vector xs = z.head(3), ys = z.tail(3);
    const RunResult r = run(StepConfig{a, 0.05, 10000, 1}, *ex.game, ex.network, ex.reference);
    const NetworkState& s = r.final_state;
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      worst = std::max(worst, std::max((s.x1.row(k).transpose() - xs).norm(), (s.y1.row(k).transpose() - ys).norm()));
      worst = std::max(worst, std::max((s.x2.row(k).transpose() - xs).norm(), (s.y2.row(k).transpose() - ys).norm()));
    }
    ok = ok && worst <= 1e-6;
    detail += fmt("%s max_dist=%.3e ", to_string(a), worst);
  }
  return {ok, detail};
}

// Steady-state means over 20 seeds for the mu sweep shared by criteria 5 and 6.
struct SweepCell {
  double mse = 0, consensus = 0, d = 0;
};

const std::vector<std::vector<SweepCell>>& cournot_sweep() {
  static const auto cells = [] {
    const ExperimentConfig cfg = cournot_preset();
    const std::vector<Algorithm> algs{kCournotItc, Algorithm::AtcC};
    const std::vector<double> mus{0.01, 0.005};
    std::vector<std::vector<SweepCell>> out(algs.size(), std::vector<SweepCell>(mus.size()));
    for (std::size_t a = 0; a < algs.size(); ++a) {
      const Experiment ex = build_experiment(cfg, algs[a]);
      for (std::size_t m = 0; m < mus.size(); ++m) {
        std::vector<SweepCell> per_seed(20);
        parallel_for(20, [&](std::size_t s) {
          const RunResult r = run(StepConfig{algs[a], mus[m], 10000, s + 1}, *ex.game, ex.network, ex.reference);
          per_seed[s] = {steady_state(r.trajectory, Field::Mse), steady_state(r.trajectory, Field::ConsensusError),
                         steady_state(r.trajectory, Field::DNormSq)};
        });
        for (const auto& c : per_seed) {
          out[a][m].mse += c.mse / 20;
          out[a][m].consensus += c.consensus / 20;
          out[a][m].d += c.d / 20;
        }
      }
    }
    return out;
  }();
  return cells;
}

Verdict criterion5() {
  const auto& c = cournot_sweep();
  const double itc = c[0][0].mse / c[0][1].mse, atcc = c[1][0].mse / c[1][1].mse;
  const auto in = [](double v) { return v >= 1.5 && v <= 3.0; };
  return {in(itc) && in(atcc),
          fmt("mse ratio atc-itc=%.3f atc-c=%.3f (mse at mu=0.01: %.3e, %.3e)", itc, atcc, c[0][0].mse, c[1][0].mse)};
}

Verdict criterion6() {
  const auto& c = cournot_sweep();
  const auto in = [](double v) { return v >= 2.5 && v <= 6.0; };
  bool ok = true;
  std::string detail;
  const char* names[] = {"atc-itc", "atc-c"};
  for (int a = 0; a < 2; ++a) {
    const double ce = c[a][0].consensus / c[a][1].consensus, d = c[a][0].d / c[a][1].d;
    ok = ok && in(ce) && in(d);
    detail += fmt("%s consensus=%.3f d=%.3f ", names[a], ce, d);
  }
  return {ok, detail};
}

Verdict criterion7() {
  CournotParams params = CournotParams::paper();
  params.noise_amplitude = 0.0;
  const CournotGame game(params);
  const auto m = paper_cournot_matrices();
  const PerronWeights p = perron_weights(m.a1, m.a2);
  std::mt19937_64 gen(7);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto rm = [&] { return Matrix(Matrix::NullaryExpr(3, 3, [&] { return n(gen); })); };
  double worst = 0.0;
  for (Algorithm a : {Algorithm::AtcItc, Algorithm::AtcC, Algorithm::Cd, Algorithm::AtcItcPartialObs}) {
    const Network net{m.a1, m.a2, a == Algorithm::AtcC ? m.c_strong : m.c_weak};
    for (int trial = 0; trial < 10; ++trial) {
      const NetworkState s{rm(), rm(), rm(), rm()};
      const double mu = 0.05;
      const NetworkState next = step(a, s, game, net, mu, draw_noise(game, 0, 1));
      const Centroids before = centroids(s, p), after = centroids(next, p);
      Vector gx = Vector::Zero(3), gy = Vector::Zero(3);
      for (int k = 0; k < 3; ++k) {
        gx += p.p1(k) * game.mean_grad_x({Team::One, k}, s.x1.row(k).transpose(), s.y1.row(k).transpose());
        gy += p.p2(k) * game.mean_grad_y({Team::Two, k}, s.x2.row(k).transpose(), s.y2.row(k).transpose());
      }
      worst = std::max(worst, (after.x_c - (before.x_c - mu * gx)).cwiseAbs().maxCoeff());
      worst = std::max(worst, (after.y_c - (before.y_c - mu * gy)).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-12, fmt("max residual=%.2e", worst)};
}

Verdict criterion8() {
  const ExperimentConfig cfg = cournot_preset();
  const Experiment itc = build_experiment(cfg, kCournotItc);
  const Experiment cd = build_experiment(cfg, Algorithm::Cd);
  std::vector<int> faster(20, 0);
  std::vector<std::int64_t> hit_itc(20, -1), hit_cd(20, -1);
  parallel_for(20, [&](std::size_t s) {
    const auto a = first_hit(run(StepConfig{kCournotItc, 0.05, 10000, s + 1}, *itc.game, itc.network, itc.reference, true)
                                 .trajectory, 1e-3);
    const auto b = first_hit(run(StepConfig{Algorithm::Cd, 0.05, 10000, s + 1}, *cd.game, cd.network, cd.reference, true)
                                 .trajectory, 1e-3);
    hit_itc[s] = a.value_or(-1);
    hit_cd[s] = b.value_or(-1);
    faster[s] = a && (!b || *a < *b);
  });
  const int wins = static_cast<int>(std::count(faster.begin(), faster.end(), 1));
  const int reached = static_cast<int>(std::count_if(hit_itc.begin(), hit_itc.end(), [](auto v) { return v >= 0; }));
  return {wins >= 16, fmt("atc-itc strictly faster in %d/20 seeds (atc-itc reached threshold in %d, cd in %d)", wins,
                          reached,
                          static_cast<int>(std::count_if(hit_cd.begin(), hit_cd.end(), [](auto v) { return v >= 0; })))};
}

Verdict criterion9() {
  const auto m = paper_cournot_matrices();
  const QuadraticGame game(QuadraticParams{}, perron_weights(m.a1, m.a2));
  const Network net{m.a1, m.a2, m.c_weak};
  std::mt19937_64 gen(9);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto rm = [&](int r, int c) { return Matrix(Matrix::NullaryExpr(r, c, [&] { return n(gen); })); };
  const auto cfg = game.config();
  NetworkState a{rm(cfg.k1, cfg.m1), rm(cfg.k1, cfg.m2), rm(cfg.k2, cfg.m1), rm(cfg.k2, cfg.m2)};
  NetworkState b = a;
  int mismatches = 0;
  for (int i = 1; i <= 100; ++i) {
    const auto noise = draw_noise(game, 5, i);
    a = step_atc_itc(a, game, net, 0.05, noise);
    b = step_atc_itc_po(b, game, net, 0.05, noise);
    const bool same = a.x1 == b.x1 && a.y1 == b.y1 && a.x2 == b.x2 && a.y2 == b.y2;
    mismatches += !same;
  }
  return {mismatches == 0, fmt("iterations with any differing bit: %d/100", mismatches)};
}

Verdict criterion10() {
  const ExperimentConfig cfg = wgan_preset();
  const std::vector<Algorithm> all{Algorithm::AtcC, Algorithm::AtcItc, Algorithm::Cd};
  std::vector<Experiment> ex;
  for (Algorithm a : all) ex.push_back(build_experiment(cfg, a));
  const auto& game = dynamic_cast<const WganGame&>(*ex[0].game);
  const std::uint64_t n_seeds = 5;
  std::vector<int> unstable_ok(n_seeds, 0), stable_ok(n_seeds, 0), atcc_stable(n_seeds, 0);
  std::vector<double> ratio(n_seeds, 0.0), worst_pi(n_seeds, 0.0);
  parallel_for(n_seeds, [&](std::size_t s) {
    const std::uint64_t seed = s + 1;
    const auto run_one = [&](std::size_t idx, double mu) {
      return run(cfg.step_config(seed, all[idx], mu), *ex[idx].game, ex[idx].network, ex[idx].reference, true);
    };
    const RunResult cd_fast = run_one(2, 0.05);
    const RunResult atcc_fast = run_one(0, 0.05);
    atcc_stable[s] = !atcc_fast.trajectory.diverged_at;
    if (cd_fast.trajectory.diverged_at) {
      ratio[s] = INFINITY;
      unstable_ok[s] = 1;
    } else if (!atcc_stable[s]) {
      ratio[s] = std::nan("");
    } else {
      ratio[s] = steady_state(cd_fast.trajectory, Field::GradNorm) /
                 steady_state(atcc_fast.trajectory, Field::GradNorm);
      unstable_ok[s] = ratio[s] >= 2.0;
    }
    bool all_ok = true;
    for (std::size_t a = 0; a < all.size(); ++a) {
      StepConfig sc = cfg.step_config(seed, all[a], 0.01);
      sc.iterations = 5000;
      const RunResult r = run(sc, *ex[a].game, ex[a].network, ex[a].reference, true);
      if (r.trajectory.diverged_at) {
        all_ok = false;
        continue;
      }
      const double g0 = r.trajectory.records.front().grad_norm;
      bool reached = false;
      for (const Record& rec : r.trajectory.records) reached = reached || rec.grad_norm <= 0.1 * g0;
      const Centroids c = centroids(r.final_state, ex[a].weights);
      const double pi = std::abs(game.moments(c.x_c).mean - game.params().data_mean);
      worst_pi[s] = std::max(worst_pi[s], pi);
      all_ok = all_ok && reached && pi <= 0.05;
    }
    stable_ok[s] = all_ok;
  });
  int good = 0, good_with_stable_atcc = 0;
  std::string detail;
  for (std::size_t s = 0; s < n_seeds; ++s) {
    good += unstable_ok[s] && stable_ok[s];
    good_with_stable_atcc += unstable_ok[s] && stable_ok[s] && atcc_stable[s];
    detail += fmt("[seed %d cd/atc-c=%.3g atc-c@0.05 stable=%d mu=0.01 ok=%d |pi|=%.3g] ", static_cast<int>(s + 1),
                  ratio[s], atcc_stable[s], stable_ok[s], worst_pi[s]);
  }
  return {good >= 3, fmt("%d/5 seeds (%d with atc-c also stable at mu=0.05) ", good, good_with_stable_atcc) + detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion11() {
  ExperimentConfig cfg = cournot_preset();
  cfg.seeds = {1, 2, 3};
  const fs::path base = fs::temp_directory_path() / "compnet_acceptance_repro";
  fs::remove_all(base);
  run_experiment(cfg, base / "a");
  run_experiment(cfg, base / "b");
  int differing = 0;
  for (auto seed : cfg.seeds) {
    const std::string name = "seed_" + std::to_string(seed) + ".csv";
    differing += slurp(base / "a" / name) != slurp(base / "b" / name);
  }
  const bool summary_same = slurp(base / "a" / "summary.json") == slurp(base / "b" / "summary.json");
  fs::remove_all(base);
  return {differing == 0 && summary_same, fmt("differing csv files: %d, summary identical: %d", differing, summary_same)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion numbers to run (default: all)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (int i = 1; i <= 11; ++i) selected.push_back(i);
  }

  const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10, criterion11};
  bool all = true;
  for (int n : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[n - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s (%.2fs) %s\n", n, v.passed ? "PASS" : "FAIL", secs, v.detail.c_str());
    std::fflush(stdout);
    all = all && v.passed;
  }
  return all ? 0 : 1;
}
