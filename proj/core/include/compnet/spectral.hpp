#pragma once

// Augmented transition matrices for the inferred-strategy dynamics and the
// eigenvalue-based stability proxies derived from them.

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "compnet/topology.hpp"

namespace compnet {

/// [[A1, A1 * C12], [0, C2]]  (Team-1 agents first, then Team-2 agents).
Matrix build_bx(const CombinationMatrix& a1, const Matrix& c12, const Matrix& c2);
/// [[A2, A2 * C21], [0, C1]]  (Team-2 agents first, then Team-1 agents).
Matrix build_by(const CombinationMatrix& a2, const Matrix& c21, const Matrix& c1);

/// ||B [p; 0] - [p; 0]||_inf.
double perron_property_check(const Matrix& b, const Vector& p_team);

/// Eigenvalue moduli sorted in decreasing order. Throws NumericalError if the
/// dense solver fails.
std::vector<double> eigenvalue_moduli(const Matrix& m);

double spectral_radius(const Matrix& m);

/// Second-largest eigenvalue modulus (0 for a 1x1 matrix).
double subdominant_modulus(const Matrix& b);

/// ceil(log(mu^2) / log(lambda2)), an order-of-magnitude transient length.
/// Throws StabilityError when lambda2 >= 1 and ArgumentError for mu <= 0.
std::int64_t predict_transient(double mu, double lambda2);

struct SpectralReport {
  double perron_residual_bx = 0.0;
  double perron_residual_by = 0.0;
  double subdominant_bx = 0.0;
  double subdominant_by = 0.0;
  double leading_modulus_bx = 0.0;
  double leading_modulus_by = 0.0;
  double rho_c1 = 0.0;
  double rho_c2 = 0.0;
  double subdominant_a1 = 0.0;
  double subdominant_a2 = 0.0;
  double column_defect_bx = 0.0;
  double column_defect_by = 0.0;

  /// Whether the report satisfies the stability conditions expected under a
  /// primitive within-team topology and a weak inference matrix.
  bool stable() const noexcept;
  nlohmann::json to_json() const;
};

SpectralReport spectral_report(const CombinationMatrix& a1, const CombinationMatrix& a2,
                               const InferenceMatrix& c);

}  // namespace compnet
