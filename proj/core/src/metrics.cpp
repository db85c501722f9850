#include "compnet/metrics.hpp"

#include <cmath>

#include "compnet/errors.hpp"

namespace compnet {

NetworkState NetworkState::zeros(const TeamConfig& cfg) {
  cfg.check();
  return {Matrix::Zero(cfg.k1, cfg.m1), Matrix::Zero(cfg.k1, cfg.m2),
          Matrix::Zero(cfg.k2, cfg.m1), Matrix::Zero(cfg.k2, cfg.m2)};
}

NetworkState NetworkState::consensus(const TeamConfig& cfg, const Vector& x, const Vector& y) {
  cfg.check();
  if (x.size() != cfg.m1 || y.size() != cfg.m2) {
    throw StructuralError("consensus state: strategy dimensions do not match");
  }
  const Eigen::RowVectorXd xr = x.transpose();
  const Eigen::RowVectorXd yr = y.transpose();
  return {xr.replicate(cfg.k1, 1), yr.replicate(cfg.k1, 1), xr.replicate(cfg.k2, 1),
          yr.replicate(cfg.k2, 1)};
}

bool NetworkState::all_finite() const {
  return x1.allFinite() && y1.allFinite() && x2.allFinite() && y2.allFinite();
}

double NetworkState::max_abs() const {
  double m = 0.0;
  for (const Matrix* b : {&x1, &y1, &x2, &y2}) {
    if (b->size() > 0) m = std::max(m, b->cwiseAbs().maxCoeff());
  }
  return m;
}

Vector Centroids::z() const {
  Vector out(x_c.size() + y_c.size());
  out << x_c, y_c;
  return out;
}

Centroids centroids(const NetworkState& state, const PerronWeights& p) {
  if (p.p1.size() != state.x1.rows() || p.p2.size() != state.y2.rows()) {
    throw StructuralError("centroids: Perron weights do not match the team sizes");
  }
  return {state.x1.transpose() * p.p1, state.y2.transpose() * p.p2};
}

double consensus_error(const NetworkState& state, const Vector& x_c, const Vector& y_c) {
  const auto dev = [](const Matrix& block, const Vector& c) {
    return (block.rowwise() - c.transpose()).squaredNorm();
  };
  return dev(state.x1, x_c) + dev(state.y2, y_c) + dev(state.x2, x_c) + dev(state.y1, y_c);
}

double perturbation_diag(const Vector& z_c_prev, const Vector& z_c, double mu,
                         const Vector& f_prev) {
  return (z_c - z_c_prev + mu * f_prev).squaredNorm();
}

Field parse_field(const std::string& name) {
  if (name == "iter" || name == "iteration") return Field::Iteration;
  if (name == "consensus_err") return Field::ConsensusError;
  if (name == "mse") return Field::Mse;
  if (name == "grad_norm") return Field::GradNorm;
  if (name == "d_norm_sq") return Field::DNormSq;
  throw ArgumentError("unknown trajectory field '" + name + "'");
}

const char* to_string(Field f) noexcept {
  switch (f) {
    case Field::Iteration: return "iter";
    case Field::ConsensusError: return "consensus_err";
    case Field::Mse: return "mse";
    case Field::GradNorm: return "grad_norm";
    case Field::DNormSq: return "d_norm_sq";
  }
  return "?";
}

namespace {

std::optional<double> value_of(const Record& r, Field f) {
  switch (f) {
    case Field::Iteration: return static_cast<double>(r.iteration);
    case Field::ConsensusError: return r.consensus_error;
    case Field::Mse: return r.mse;
    case Field::GradNorm: return r.grad_norm;
    case Field::DNormSq: return r.d_norm_sq;
  }
  return std::nullopt;
}

}  // namespace

double steady_state(const Trajectory& trajectory, Field field, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw ArgumentError("steady_state: window fraction must lie in (0, 1]");
  }
  const auto n = trajectory.records.size();
  const auto window =
      static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n)));
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = n - std::min(window, n); i < n; ++i) {
    if (const auto v = value_of(trajectory.records[i], field)) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) {
    throw ArgumentError(std::string("steady_state: no values of '") + to_string(field) +
                        "' in the window");
  }
  return sum / static_cast<double>(count);
}

}  // namespace compnet
