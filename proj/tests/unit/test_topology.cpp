#include <doctest.h>

#include <nlohmann/json.hpp>

#include <random>

#include "compnet/errors.hpp"
#include "compnet/topology.hpp"
#include "test_util.hpp"

using namespace compnet;

namespace {

Matrix path_adjacency(int n) {
  Matrix a = Matrix::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = 1.0;
  return a;
}

// Random connected symmetric graph: a spanning path plus random chords.
Matrix random_connected(std::mt19937_64& gen, int n) {
  Matrix a = path_adjacency(n);
  std::bernoulli_distribution coin(0.3);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (coin(gen)) a(i, j) = a(j, i) = 1.0;
    }
  }
  return a;
}

}  // namespace

TEST_CASE("cournot combination matrices pass validation") {
  const auto m = paper_cournot_matrices();
  CHECK(validate_combination_matrix(m.a1).passed());
  CHECK(validate_combination_matrix(m.a2).passed());
  CHECK(m.a1.entries()(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.a1.entries()(0, 1) == 0.5);
}

TEST_CASE("identity is not primitive") {
  const auto report = validate_combination_matrix(CombinationMatrix(Team::One, Matrix::Identity(3, 3)));
  CHECK_FALSE(report.passed());
  CHECK(report.find("left_stochastic")->passed);
  CHECK_FALSE(report.find("primitive")->passed);
}

TEST_CASE("column summing to 0.9 fails stochasticity") {
  Matrix a(2, 2);
  a << 0.5, 0.5, 0.4, 0.5;
  const auto report = validate_combination_matrix(CombinationMatrix(Team::One, a));
  CHECK_FALSE(report.passed());
  CHECK_FALSE(report.find("left_stochastic")->passed);
  CHECK(report.find("nonnegative")->passed);
}

TEST_CASE("negative entry fails nonnegativity") {
  Matrix a(2, 2);
  a << 1.2, 0.5, -0.2, 0.5;
  CHECK_FALSE(validate_combination_matrix(CombinationMatrix(Team::One, a)).find("nonnegative")->passed);
}

TEST_CASE("size mismatch against the team config is structural") {
  const auto m = paper_cournot_matrices();
  CHECK_THROWS_AS(validate_combination_matrix(m.a1, TeamConfig{4, 3, 1, 1}), StructuralError);
  CHECK_THROWS_AS(CombinationMatrix(Team::One, Matrix::Ones(2, 3)), StructuralError);
}

TEST_CASE("single-agent team is primitive and stochastic") {
  CHECK(validate_combination_matrix(CombinationMatrix(Team::Two, Matrix::Ones(1, 1))).passed());
}

TEST_CASE("primitivity needs aperiodicity") {
  // A 2-cycle is irreducible but periodic.
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(is_irreducible(swap));
  CHECK_FALSE(is_primitive(swap));
  // A 3-cycle with one self-loop is primitive, reached only at a high power.
  Matrix cyc(3, 3);
  cyc << 0.5, 0, 1, 0.5, 0, 0, 0, 1, 0;
  CHECK(is_primitive(cyc));
}

TEST_CASE("inference matrix of the Cournot setup: weak passes, strong fails") {
  const auto m = paper_cournot_matrices();
  const TeamConfig cfg{3, 3, 3, 3};
  CHECK(validate_inference_matrix(m.c_weak, cfg).passed());
  const auto strong = validate_inference_matrix(m.c_weak.with_mode(CrossMode::Strong), cfg);
  CHECK_FALSE(strong.passed());
  CHECK_FALSE(strong.find("c1_zero")->passed);
  CHECK(m.c_weak.full()(3, 0) == 0.1);
  CHECK(m.c_weak.full()(3, 3) == 0.45);
}

TEST_CASE("uniform bipartite strong matrix passes strong validation") {
  for (auto [k1, k2] : {std::pair{3, 3}, std::pair{6, 4}, std::pair{1, 5}}) {
    const InferenceMatrix c = uniform_bipartite_strong(k1, k2);
    CHECK(validate_inference_matrix(c, TeamConfig{k1, k2, 1, 1}).passed());
    const auto full = testutil::to_mat(c.full());
    for (std::size_t col = 0; col < full.size(); ++col) {
      CHECK(oracle::column_sum(full, col) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_FALSE(validate_inference_matrix(c.with_mode(CrossMode::Weak), TeamConfig{k1, k2, 1, 1}).passed());
  }
}

TEST_CASE("weak mode rejects reducible diagonal blocks and missing cross links") {
  const TeamConfig cfg{2, 2, 1, 1};
  Matrix c(4, 4);
  // Team-1 block is the identity (reducible); one cross link each way.
  c << 1, 0, 0.5, 0,
       0, 0.5, 0, 0,
       0, 0.5, 0.5, 0.5,
       0, 0, 0, 0.5;
  const auto report = validate_inference_matrix(InferenceMatrix(c, 2, CrossMode::Weak), cfg);
  CHECK_FALSE(report.find("c1_irreducible")->passed);
  CHECK(report.find("c12_has_link")->passed);

  Matrix isolated = Matrix::Zero(4, 4);
  isolated.topLeftCorner(2, 2).setConstant(0.5);
  isolated.bottomRightCorner(2, 2).setConstant(0.5);
  const auto r2 = validate_inference_matrix(InferenceMatrix(isolated, 2, CrossMode::Weak), cfg);
  CHECK_FALSE(r2.find("c12_has_link")->passed);
  CHECK_FALSE(r2.find("c21_has_link")->passed);
  CHECK_FALSE(r2.passed());
}

TEST_CASE("inference block mismatch is structural") {
  const auto m = paper_cournot_matrices();
  CHECK_THROWS_AS(validate_inference_matrix(m.c_weak, TeamConfig{2, 4, 1, 1}), StructuralError);
}

TEST_CASE("Perron weights match the linear-solve oracle") {
  const auto m = paper_cournot_matrices();
  const PerronWeights p = perron_weights(m.a1, m.a2);
  const auto p1 = oracle::perron(testutil::to_mat(m.a1.entries()));
  const auto p2 = oracle::perron(testutil::to_mat(m.a2.entries()));
  CHECK(oracle::max_abs_diff(testutil::to_vec(p.p1), p1) < 1e-14);
  CHECK(oracle::max_abs_diff(testutil::to_vec(p.p2), p2) < 1e-14);
  CHECK(p1[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
  CHECK(p1[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK(p1[2] == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK((m.a2.entries() * p.p2 - p.p2).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("doubly stochastic matrix has the uniform Perron vector") {
  Matrix a(4, 4);
  a << 0.4, 0.3, 0.2, 0.1,
       0.3, 0.4, 0.1, 0.2,
       0.2, 0.1, 0.4, 0.3,
       0.1, 0.2, 0.3, 0.4;
  const Vector p = perron_vector(CombinationMatrix(Team::One, a));
  for (int i = 0; i < 4; ++i) CHECK(p(i) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("non-primitive input has no Perron weights") {
  CHECK_THROWS_AS(perron_vector(CombinationMatrix(Team::One, Matrix::Identity(3, 3))), ValidationError);
}

TEST_CASE("averaging rule on small graphs") {
  SUBCASE("two-node path") {
    const auto a = build_averaging_matrix(Team::One, Matrix::Ones(2, 2));
    CHECK((a.entries().array() == 0.5).all());
  }
  SUBCASE("three-node path") {
    const Matrix a = build_averaging_matrix(Team::One, path_adjacency(3)).entries();
    for (int l = 0; l < 3; ++l) CHECK(a(l, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(a(0, 0) == 0.5);
    CHECK(a(1, 0) == 0.5);
    CHECK(a(2, 0) == 0.0);
    CHECK(a(0, 2) == 0.0);
    CHECK(a(1, 2) == 0.5);
    CHECK(a(2, 2) == 0.5);
  }
  SUBCASE("complete graph") {
    const Matrix a = build_averaging_matrix(Team::Two, Matrix::Ones(5, 5)).entries();
    CHECK((a.array() == 0.2).all());
  }
}

TEST_CASE("averaging rule rejects bad adjacency") {
  Matrix disconnected = Matrix::Identity(4, 4);
  disconnected(0, 1) = disconnected(1, 0) = 1.0;
  CHECK_THROWS_AS(build_averaging_matrix(Team::One, disconnected), ValidationError);
  Matrix asym = path_adjacency(3);
  asym(0, 2) = 1.0;
  CHECK_THROWS(build_averaging_matrix(Team::One, asym));
  Matrix no_loop = path_adjacency(3);
  no_loop(1, 1) = 0.0;
  CHECK_THROWS(build_averaging_matrix(Team::One, no_loop));
}

TEST_CASE("property: averaging matrices of connected graphs validate, Perron residual small") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 9;
    const auto a = build_averaging_matrix(Team::One, random_connected(gen, n));
    const auto report = validate_combination_matrix(a);
    REQUIRE(report.passed());
    const auto& m = a.entries();
    CHECK(((Eigen::RowVectorXd::Ones(n) * m).array() - 1.0).abs().maxCoeff() <= 1e-12);
    const Vector p = perron_vector(a);
    CHECK((m * p - p).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(p.minCoeff() > 0.0);
    CHECK(oracle::max_abs_diff(testutil::to_vec(p), oracle::perron_power(testutil::to_mat(m))) < 1e-9);
  }
}

TEST_CASE("column normalisation of an incoming pattern") {
  Matrix pattern(3, 3);
  pattern << 1, 1, 0, 1, 0, 1, 0, 1, 1;
  const Matrix c = normalize_columns(pattern);
  for (int k = 0; k < 3; ++k) CHECK(c.col(k).sum() == doctest::Approx(1.0));
  Matrix empty_col = pattern;
  empty_col.col(2).setZero();
  CHECK_THROWS(normalize_columns(empty_col));
}

TEST_CASE("validation report serialises every check") {
  const auto report = validate_combination_matrix(paper_cournot_matrices().a1);
  const auto j = report.to_json();
  CHECK(j.at("passed").get<bool>());
  CHECK(j.at("checks").size() == 3);
}
