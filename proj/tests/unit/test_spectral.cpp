#include <doctest.h>

#include <nlohmann/json.hpp>

#include <random>

#include "compnet/errors.hpp"
#include "compnet/spectral.hpp"
#include "test_util.hpp"

using namespace compnet;

namespace {

// Random weak-mode inference matrix: positive diagonal blocks, a few cross
// links, columns normalised.
InferenceMatrix random_weak(std::mt19937_64& gen, int k1, int k2) {
  const int k = k1 + k2;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::bernoulli_distribution link(0.4);
  Matrix c = Matrix::Zero(k, k);
  c.topLeftCorner(k1, k1) = Matrix::NullaryExpr(k1, k1, [&] { return u(gen); });
  c.bottomRightCorner(k2, k2) = Matrix::NullaryExpr(k2, k2, [&] { return u(gen); });
  c(k1, 0) = u(gen);  // guarantee one link in each direction
  c(0, k1) = u(gen);
  for (int l = 0; l < k1; ++l) {
    for (int r = 0; r < k2; ++r) {
      if (link(gen)) c(l, k1 + r) = u(gen);
      if (link(gen)) c(k1 + r, l) = u(gen);
    }
  }
  return {normalize_columns(c), k1, CrossMode::Weak};
}

CombinationMatrix random_combination(std::mt19937_64& gen, Team team, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Matrix a = Matrix::NullaryExpr(n, n, [&] { return u(gen); });
  return {team, normalize_columns(a)};
}

}  // namespace

TEST_CASE("B^(x) and B^(y) of the Cournot setup are left-stochastic") {
  const auto m = paper_cournot_matrices();
  const Matrix bx = build_bx(m.a1, m.c_weak.c12(), m.c_weak.c2());
  const Matrix by = build_by(m.a2, m.c_weak.c21(), m.c_weak.c1());
  CHECK(bx.rows() == 6);
  const auto bxm = testutil::to_mat(bx);
  const auto bym = testutil::to_mat(by);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(std::abs(oracle::column_sum(bxm, k) - 1.0) <= 1e-12);
    CHECK(std::abs(oracle::column_sum(bym, k) - 1.0) <= 1e-12);
  }
  // Top-right block is A1 C12.
  const Matrix expected = m.a1.entries() * m.c_weak.c12();
  CHECK((bx.topRightCorner(3, 3) - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(bx.bottomLeftCorner(3, 3).isZero(0.0));
}

TEST_CASE("decoupled B is block diagonal") {
  const auto m = paper_cournot_matrices();
  const Matrix bx = build_bx(m.a1, Matrix::Zero(3, 3), Matrix::Identity(3, 3));
  CHECK(bx.topLeftCorner(3, 3) == m.a1.entries());
  CHECK(bx.bottomRightCorner(3, 3) == Matrix::Identity(3, 3));
  CHECK(bx.topRightCorner(3, 3).isZero(0.0));
  const Vector p = perron_vector(m.a1);
  CHECK(perron_property_check(bx, p) <= 1e-10);
}

TEST_CASE("Perron property of B^(x) with the oracle Perron vector") {
  const auto m = paper_cournot_matrices();
  const Matrix bx = build_bx(m.a1, m.c_weak.c12(), m.c_weak.c2());
  const auto p1 = oracle::perron(testutil::to_mat(m.a1.entries()));
  CHECK(perron_property_check(bx, testutil::from_vec(p1)) <= 1e-10);

  // Perturbed vector: one entry +0.01 then renormalised.
  auto bad = p1;
  bad[0] += 0.01;
  double s = 0.0;
  for (double v : bad) s += v;
  for (auto& v : bad) v /= s;
  CHECK(perron_property_check(bx, testutil::from_vec(bad)) > 1e-3);
}

TEST_CASE("B shape mismatch is structural") {
  const auto m = paper_cournot_matrices();
  CHECK_THROWS_AS(build_bx(m.a1, Matrix::Zero(2, 3), m.c_weak.c2()), StructuralError);
  CHECK_THROWS_AS(perron_property_check(Matrix::Identity(6, 6), Vector::Ones(7)), StructuralError);
}

TEST_CASE("subdominant modulus examples") {
  const auto m = paper_cournot_matrices();
  const Matrix bx = build_bx(m.a1, m.c_weak.c12(), m.c_weak.c2());
  const double l2 = subdominant_modulus(bx);
  CHECK(l2 > 0.0);
  CHECK(l2 < 1.0);
  const auto mod = eigenvalue_moduli(bx);
  CHECK(std::abs(mod.front() - 1.0) <= 1e-10);

  CHECK(subdominant_modulus(Matrix::Constant(4, 4, 0.25)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(subdominant_modulus(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(subdominant_modulus(Matrix::Ones(1, 1)) == 0.0);
}

TEST_CASE("transient prediction") {
  CHECK(predict_transient(0.1, 0.5) == 7);
  CHECK(predict_transient(1.0, 0.5) == 0);
  CHECK(predict_transient(0.01, 0.9) == 88);
  CHECK_THROWS_AS(predict_transient(0.1, 1.0), StabilityError);
  CHECK_THROWS_AS(predict_transient(0.1, 1.2), StabilityError);
  CHECK_THROWS_AS(predict_transient(0.0, 0.5), ArgumentError);
}

TEST_CASE("spectral report of the Cournot setup") {
  const auto m = paper_cournot_matrices();
  const SpectralReport r = spectral_report(m.a1, m.a2, m.c_weak);
  CHECK(r.stable());
  CHECK(r.rho_c1 < 1.0);
  CHECK(r.rho_c2 < 1.0);
  CHECK(r.perron_residual_bx <= 1e-10);
  CHECK(r.perron_residual_by <= 1e-10);
  CHECK(r.column_defect_bx <= 1e-12);
  CHECK(r.column_defect_by <= 1e-12);
  const auto j = r.to_json();
  CHECK(j.contains("subdominant_bx"));
}

TEST_CASE("property: Lemma-4 structure holds for random weak-valid inputs") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int k1 = 1 + trial % 5;
    const int k2 = 1 + (trial / 5) % 4;
    const auto a1 = random_combination(gen, Team::One, k1);
    const auto a2 = random_combination(gen, Team::Two, k2);
    const InferenceMatrix c = random_weak(gen, k1, k2);
    REQUIRE(validate_inference_matrix(c, TeamConfig{k1, k2, 1, 1}).passed());
    const PerronWeights p = perron_weights(a1, a2);
    const Matrix bx = build_bx(a1, c.c12(), c.c2());
    const Matrix by = build_by(a2, c.c21(), c.c1());
    CHECK(stochasticity_defect(bx) <= 1e-12);
    CHECK(stochasticity_defect(by) <= 1e-12);
    CHECK(std::abs(eigenvalue_moduli(bx).front() - 1.0) <= 1e-10);
    CHECK(std::abs(eigenvalue_moduli(by).front() - 1.0) <= 1e-10);
    CHECK(perron_property_check(bx, p.p1) <= 1e-10);
    CHECK(perron_property_check(by, p.p2) <= 1e-10);
    CHECK(subdominant_modulus(bx) < 1.0);
    CHECK(subdominant_modulus(by) < 1.0);
    CHECK(spectral_radius(c.c1()) < 1.0);
    CHECK(spectral_radius(c.c2()) < 1.0);
  }
}

TEST_CASE("property: subdominant modulus is invariant under relabelling") {
  std::mt19937_64 gen(9);
  const auto m = paper_cournot_matrices();
  const Matrix bx = build_bx(m.a1, m.c_weak.c12(), m.c_weak.c2());
  Eigen::VectorXi idx = Eigen::VectorXi::LinSpaced(6, 0, 5);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(idx.data(), idx.data() + idx.size(), gen);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(idx);
    const Matrix permuted = perm * bx * perm.transpose();
    CHECK(subdominant_modulus(permuted) == doctest::Approx(subdominant_modulus(bx)).epsilon(1e-10));
  }
}
