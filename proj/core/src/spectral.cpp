#include "compnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "compnet/errors.hpp"

namespace compnet {

namespace {

Matrix augmented(const Matrix& a, const Matrix& cross, const Matrix& tail) {
  if (cross.rows() != a.rows() || cross.cols() != tail.rows() || tail.rows() != tail.cols()) {
    throw StructuralError("augmented transition blocks do not conform");
  }
  const auto n = a.rows();
  const auto m = tail.rows();
  Matrix b = Matrix::Zero(n + m, n + m);
  b.topLeftCorner(n, n) = a;
  b.topRightCorner(n, m) = a * cross;
  b.bottomRightCorner(m, m) = tail;
  return b;
}

}  // namespace

Matrix build_bx(const CombinationMatrix& a1, const Matrix& c12, const Matrix& c2) {
  return augmented(a1.entries(), c12, c2);
}

Matrix build_by(const CombinationMatrix& a2, const Matrix& c21, const Matrix& c1) {
  return augmented(a2.entries(), c21, c1);
}

double perron_property_check(const Matrix& b, const Vector& p_team) {
  if (p_team.size() > b.rows()) throw StructuralError("Perron vector longer than matrix");
  Vector padded = Vector::Zero(b.rows());
  padded.head(p_team.size()) = p_team;
  return (b * padded - padded).cwiseAbs().maxCoeff();
}

std::vector<double> eigenvalue_moduli(const Matrix& m) {
  if (m.rows() != m.cols()) throw StructuralError("eigenvalues need a square matrix");
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-solver did not converge");
  std::vector<double> moduli;
  moduli.reserve(static_cast<std::size_t>(m.rows()));
  for (const auto& lambda : solver.eigenvalues()) moduli.push_back(std::abs(lambda));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  return moduli;
}

double spectral_radius(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return eigenvalue_moduli(m).front();
}

double subdominant_modulus(const Matrix& b) {
  const auto moduli = eigenvalue_moduli(b);
  return moduli.size() < 2 ? 0.0 : moduli[1];
}

std::int64_t predict_transient(double mu, double lambda2) {
  if (!(mu > 0.0)) throw ArgumentError("step size must be positive");
  if (!(lambda2 < 1.0)) throw StabilityError("subdominant modulus must be below one");
  if (!(lambda2 > 0.0)) throw ArgumentError("subdominant modulus must be positive");
  const double steps = std::log(mu * mu) / std::log(lambda2);
  return static_cast<std::int64_t>(std::max(0.0, std::ceil(steps)));
}

bool SpectralReport::stable() const noexcept {
  return perron_residual_bx <= kPerronTolerance && perron_residual_by <= kPerronTolerance &&
         subdominant_bx < 1.0 && subdominant_by < 1.0 && rho_c1 < 1.0 && rho_c2 < 1.0 &&
         std::abs(leading_modulus_bx - 1.0) <= kPerronTolerance &&
         std::abs(leading_modulus_by - 1.0) <= kPerronTolerance &&
         column_defect_bx <= kStochasticTolerance && column_defect_by <= kStochasticTolerance;
}

nlohmann::json SpectralReport::to_json() const {
  return {
      {"perron_residual_bx", perron_residual_bx},
      {"perron_residual_by", perron_residual_by},
      {"subdominant_bx", subdominant_bx},
      {"subdominant_by", subdominant_by},
      {"leading_modulus_bx", leading_modulus_bx},
      {"leading_modulus_by", leading_modulus_by},
      {"rho_c1", rho_c1},
      {"rho_c2", rho_c2},
      {"subdominant_a1", subdominant_a1},
      {"subdominant_a2", subdominant_a2},
      {"column_defect_bx", column_defect_bx},
      {"column_defect_by", column_defect_by},
      {"stable", stable()},
  };
}

SpectralReport spectral_report(const CombinationMatrix& a1, const CombinationMatrix& a2,
                               const InferenceMatrix& c) {
  const PerronWeights p = perron_weights(a1, a2);
  const Matrix bx = build_bx(a1, c.c12(), c.c2());
  const Matrix by = build_by(a2, c.c21(), c.c1());

  SpectralReport r;
  r.perron_residual_bx = perron_property_check(bx, p.p1);
  r.perron_residual_by = perron_property_check(by, p.p2);
  const auto mx = eigenvalue_moduli(bx);
  const auto my = eigenvalue_moduli(by);
  r.leading_modulus_bx = mx.front();
  r.leading_modulus_by = my.front();
  r.subdominant_bx = mx.size() > 1 ? mx[1] : 0.0;
  r.subdominant_by = my.size() > 1 ? my[1] : 0.0;
  r.rho_c1 = spectral_radius(c.c1());
  r.rho_c2 = spectral_radius(c.c2());
  r.subdominant_a1 = subdominant_modulus(a1.entries());
  r.subdominant_a2 = subdominant_modulus(a2.entries());
  r.column_defect_bx = stochasticity_defect(bx);
  r.column_defect_by = stochasticity_defect(by);
  return r;
}

}  // namespace compnet
