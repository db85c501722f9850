#pragma once

// Centroids, consensus error, distance to the Nash point, the centroid
// perturbation diagnostic and steady-state averages over a trajectory.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compnet/topology.hpp"

namespace compnet {

/// Strategy rows of every agent; row k of each block belongs to agent k.
struct NetworkState {
  Matrix x1;  // K1 x M1, Team-1 strategies
  Matrix y1;  // K1 x M2, Team-1 estimates of y
  Matrix x2;  // K2 x M1, Team-2 estimates of x
  Matrix y2;  // K2 x M2, Team-2 strategies

  static NetworkState zeros(const TeamConfig& cfg);
  /// Every Team-1 row equals x and every Team-2 row equals y, estimates included.
  static NetworkState consensus(const TeamConfig& cfg, const Vector& x, const Vector& y);

  bool all_finite() const;
  /// Largest |entry| across the four blocks.
  double max_abs() const;
};

struct Centroids {
  Vector x_c;
  Vector y_c;

  Vector z() const;
};

Centroids centroids(const NetworkState& state, const PerronWeights& p);

/// |X1 - 1 x_c^T|^2 + |Y2 - 1 y_c^T|^2 + |X2 - 1 x_c^T|^2 + |Y1 - 1 y_c^T|^2.
double consensus_error(const NetworkState& state, const Vector& x_c, const Vector& y_c);

/// |z_c - z_c_prev + mu F(z_c_prev)|^2 with F already evaluated at z_c_prev.
double perturbation_diag(const Vector& z_c_prev, const Vector& z_c, double mu,
                         const Vector& f_prev);

struct Record {
  std::int64_t iteration = 0;
  Vector x_c;
  Vector y_c;
  double consensus_error = 0.0;
  std::optional<double> mse;  // absent when no reference point exists
  double grad_norm = 0.0;
  std::optional<double> d_norm_sq;  // absent at iteration 0
};

struct Trajectory {
  std::vector<Record> records;
  std::optional<std::int64_t> diverged_at;
};

enum class Field { Iteration, ConsensusError, Mse, GradNorm, DNormSq };

/// Accepts the CSV column names: iter, consensus_err, mse, grad_norm, d_norm_sq.
Field parse_field(const std::string& name);
const char* to_string(Field f) noexcept;

/// Mean of `field` over the last ceil(window_fraction * n) records, skipping
/// records where the field is absent. Throws ArgumentError on an empty window
/// or a fraction outside (0, 1].
double steady_state(const Trajectory& trajectory, Field field, double window_fraction = 0.5);

}  // namespace compnet
