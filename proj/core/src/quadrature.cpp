#include "compnet/quadrature.hpp"

#include <cmath>

#include "compnet/errors.hpp"

namespace compnet {

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw ArgumentError("quadrature needs at least one node");
  // Jacobi matrix of He_k: zero diagonal, off-diagonal sqrt(k).
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
  if (solver.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigen-solve failed");
  GaussHermite q;
  q.nodes = solver.eigenvalues();
  q.weights = solver.eigenvectors().row(0).transpose().array().square();
  q.weights /= q.weights.sum();
  return q;
}

}  // namespace compnet
