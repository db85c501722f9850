#pragma once

#include <random>

#include "compnet/topology.hpp"
#include "oracles.hpp"

namespace testutil {

inline oracle::Mat to_mat(const compnet::Matrix& m) {
  oracle::Mat out = oracle::zeros(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  }
  return out;
}

inline oracle::Vec to_vec(const compnet::Vector& v) { return {v.data(), v.data() + v.size()}; }

inline compnet::Vector from_vec(const oracle::Vec& v) {
  return Eigen::Map<const compnet::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline compnet::Matrix random_matrix(std::mt19937_64& gen, int rows, int cols, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  compnet::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = u(gen);
  }
  return m;
}

inline compnet::Vector random_vector(std::mt19937_64& gen, int n, double scale = 1.0) {
  return random_matrix(gen, n, 1, scale);
}

}  // namespace testutil
