#include "compnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "compnet/errors.hpp"

namespace compnet {

namespace {

using BoolMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

BoolMatrix pattern(const Matrix& m) { return (m.array() > 0.0).cast<double>().matrix(); }

BoolMatrix pattern_product(const BoolMatrix& a, const BoolMatrix& b) {
  return ((a * b).array() > 0.0).cast<double>().matrix();
}

std::vector<bool> reach(const Matrix& m, bool forward) {
  const auto n = m.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto node = stack.back();
    stack.pop_back();
    for (Eigen::Index other = 0; other < n; ++other) {
      const double w = forward ? m(node, other) : m(other, node);
      if (w > 0.0 && !seen[static_cast<std::size_t>(other)]) {
        seen[static_cast<std::size_t>(other)] = true;
        stack.push_back(other);
      }
    }
  }
  return seen;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool all_zero(const Matrix& m) {
  return m.size() == 0 || m.cwiseAbs().maxCoeff() <= kStochasticTolerance;
}

bool any_positive(const Matrix& m) { return m.size() > 0 && (m.array() > 0.0).any(); }

}  // namespace

const char* to_string(Team t) noexcept { return t == Team::One ? "team1" : "team2"; }

const char* to_string(CrossMode m) noexcept { return m == CrossMode::Strong ? "strong" : "weak"; }

void TeamConfig::check() const {
  if (k1 < 1 || k2 < 1 || m1 < 1 || m2 < 1) {
    throw StructuralError("team configuration needs K1, K2, M1, M2 >= 1");
  }
}

CombinationMatrix::CombinationMatrix(Team team, Matrix entries)
    : team_(team), entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw StructuralError("combination matrix must be square and non-empty");
  }
}

InferenceMatrix::InferenceMatrix(Matrix full, int k1, CrossMode mode)
    : full_(std::move(full)), k1_(k1), mode_(mode) {
  if (full_.rows() != full_.cols()) throw StructuralError("inference matrix must be square");
  if (k1_ < 1 || k1_ >= full_.rows()) {
    throw StructuralError("inference matrix split K1 must leave both teams non-empty");
  }
}

InferenceMatrix InferenceMatrix::from_blocks(const Matrix& c1, const Matrix& c12,
                                             const Matrix& c21, const Matrix& c2,
                                             CrossMode mode) {
  const auto k1 = c1.rows();
  const auto k2 = c2.rows();
  if (c1.cols() != k1 || c2.cols() != k2 || c12.rows() != k1 || c12.cols() != k2 ||
      c21.rows() != k2 || c21.cols() != k1) {
    throw StructuralError("inference matrix blocks do not conform");
  }
  Matrix full(k1 + k2, k1 + k2);
  full << c1, c12, c21, c2;
  return {full, static_cast<int>(k1), mode};
}

void ValidationReport::add(std::string name, bool passed, std::string detail) {
  checks_.push_back({std::move(name), passed, std::move(detail)});
}

void ValidationReport::merge(const ValidationReport& other) {
  for (const auto& c : other.checks_) {
    checks_.push_back({other.subject_ + "." + c.name, c.passed, c.detail});
  }
}

bool ValidationReport::passed() const noexcept {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : checks_) {
    nlohmann::json j{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  return {{"subject", subject_}, {"passed", passed()}, {"checks", std::move(checks)}};
}

bool is_nonnegative(const Matrix& m) { return m.size() == 0 || m.minCoeff() >= 0.0; }

double stochasticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m.colwise().sum().array() - 1.0).abs().maxCoeff();
}

bool is_left_stochastic(const Matrix& m, double tol) { return stochasticity_defect(m) <= tol; }

bool is_primitive(const Matrix& m) {
  const auto n = m.rows();
  if (n == 0 || n != m.cols()) return false;
  // Wielandt: a nonnegative n x n matrix is primitive iff its power
  // (n-1)^2 + 1 is strictly positive.
  long exponent = (n - 1) * (n - 1) + 1;
  BoolMatrix base = pattern(m);
  BoolMatrix result = BoolMatrix::Identity(n, n);
  while (exponent > 0) {
    if (exponent & 1L) result = pattern_product(result, base);
    exponent >>= 1;
    if (exponent > 0) base = pattern_product(base, base);
  }
  return (result.array() > 0.0).all();
}

bool is_irreducible(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) return false;
  if (m.rows() == 1) return true;
  const auto fwd = reach(m, true);
  const auto bwd = reach(m, false);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

ValidationReport validate_combination_matrix(const CombinationMatrix& a) {
  ValidationReport report(std::string("A_") + to_string(a.team()));
  const Matrix& m = a.entries();
  report.add("nonnegative", is_nonnegative(m), "min entry " + fmt_double(m.minCoeff()));
  const double defect = stochasticity_defect(m);
  report.add("left_stochastic", defect <= kStochasticTolerance,
             "max |column sum - 1| = " + fmt_double(defect));
  report.add("primitive", is_primitive(m));
  return report;
}

ValidationReport validate_combination_matrix(const CombinationMatrix& a, const TeamConfig& cfg) {
  if (a.size() != cfg.agents(a.team())) {
    throw StructuralError(std::string("combination matrix for ") + to_string(a.team()) +
                          " is " + std::to_string(a.size()) + "x" + std::to_string(a.size()) +
                          " but the team has " + std::to_string(cfg.agents(a.team())) +
                          " agents");
  }
  return validate_combination_matrix(a);
}

ValidationReport validate_inference_matrix(const InferenceMatrix& c, const TeamConfig& cfg) {
  if (c.k1() != cfg.k1 || c.k2() != cfg.k2) {
    throw StructuralError("inference matrix blocks do not match K1=" + std::to_string(cfg.k1) +
                          ", K2=" + std::to_string(cfg.k2));
  }
  ValidationReport report(std::string("C_") + to_string(c.mode()));
  report.add("nonnegative", is_nonnegative(c.full()));

  if (c.mode() == CrossMode::Strong) {
    report.add("c1_zero", all_zero(c.c1()));
    report.add("c2_zero", all_zero(c.c2()));
    const double d12 = stochasticity_defect(c.c12());
    const double d21 = stochasticity_defect(c.c21());
    report.add("c12_left_stochastic", d12 <= kStochasticTolerance,
               "max |column sum - 1| = " + fmt_double(d12));
    report.add("c21_left_stochastic", d21 <= kStochasticTolerance,
               "max |column sum - 1| = " + fmt_double(d21));
  } else {
    const double d = stochasticity_defect(c.full());
    report.add("left_stochastic", d <= kStochasticTolerance,
               "max |column sum - 1| = " + fmt_double(d));
    report.add("c1_irreducible", is_irreducible(c.c1()));
    report.add("c2_irreducible", is_irreducible(c.c2()));
    report.add("c12_has_link", any_positive(c.c12()));
    report.add("c21_has_link", any_positive(c.c21()));
  }
  return report;
}

Vector perron_vector(const CombinationMatrix& a) {
  const auto report = validate_combination_matrix(a);
  if (!report.passed()) {
    throw ValidationError(std::string("combination matrix for ") + to_string(a.team()) +
                          " is not primitive and left-stochastic");
  }
  const auto n = a.size();
  // Stack (A - I) p = 0 with 1^T p = 1; the system has full column rank for a
  // primitive matrix, so the least-squares solution is exact.
  Matrix system(n + 1, n);
  system.topRows(n) = a.entries() - Matrix::Identity(n, n);
  system.row(n).setOnes();
  Vector rhs = Vector::Zero(n + 1);
  rhs(n) = 1.0;
  Vector p = system.colPivHouseholderQr().solve(rhs);
  p /= p.sum();

  const double residual = (a.entries() * p - p).cwiseAbs().maxCoeff();
  if (residual > kPerronTolerance || p.minCoeff() <= 0.0) {
    throw NumericalError("Perron vector solve did not reach the required residual");
  }
  return p;
}

PerronWeights perron_weights(const CombinationMatrix& a1, const CombinationMatrix& a2) {
  return {perron_vector(a1), perron_vector(a2)};
}

CombinationMatrix build_averaging_matrix(Team team, const Matrix& adjacency) {
  if (adjacency.rows() == 0 || adjacency.rows() != adjacency.cols()) {
    throw StructuralError("adjacency must be square and non-empty");
  }
  const auto n = adjacency.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency(i, i) <= 0.0) throw ValidationError("adjacency needs every self-loop");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = adjacency(i, j);
      if (v != 0.0 && v != 1.0) throw ValidationError("adjacency must be a 0/1 matrix");
      if (v != adjacency(j, i)) throw ValidationError("adjacency must be symmetric");
    }
  }
  if (!is_irreducible(adjacency)) throw ValidationError("adjacency graph is disconnected");
  return {team, normalize_columns(adjacency)};
}

Matrix normalize_columns(const Matrix& incoming) {
  Matrix out = incoming;
  for (Eigen::Index k = 0; k < out.cols(); ++k) {
    const double degree = out.col(k).sum();
    if (degree <= 0.0) {
      throw ValidationError("column " + std::to_string(k) + " has no incoming link");
    }
    out.col(k) /= degree;
  }
  return out;
}

InferenceMatrix uniform_bipartite_strong(int k1, int k2) {
  if (k1 < 1 || k2 < 1) throw StructuralError("team sizes must be positive");
  const Matrix c12 = Matrix::Constant(k1, k2, 1.0 / k1);
  const Matrix c21 = Matrix::Constant(k2, k1, 1.0 / k2);
  return InferenceMatrix::from_blocks(Matrix::Zero(k1, k1), c12, c21, Matrix::Zero(k2, k2),
                                      CrossMode::Strong);
}

CournotMatrices paper_cournot_matrices() {
  Matrix a1(3, 3);
  a1 << 1.0 / 3, 1.0 / 2, 1.0 / 2,
        1.0 / 3, 1.0 / 2, 0.0,
        1.0 / 3, 0.0, 1.0 / 2;
  Matrix a2(3, 3);
  a2 << 1.0 / 2, 1.0 / 3, 0.0,
        1.0 / 2, 1.0 / 3, 1.0 / 2,
        0.0, 1.0 / 3, 1.0 / 2;
  Matrix c(6, 6);
  c << 3.0 / 10, 1.0 / 2, 1.0 / 2, 1.0 / 10, 0.0, 0.0,
       3.0 / 10, 1.0 / 2, 0.0, 0.0, 0.0, 0.0,
       3.0 / 10, 0.0, 1.0 / 2, 0.0, 0.0, 0.0,
       1.0 / 10, 0.0, 0.0, 9.0 / 20, 1.0 / 3, 0.0,
       0.0, 0.0, 0.0, 9.0 / 20, 1.0 / 3, 1.0 / 2,
       0.0, 0.0, 0.0, 0.0, 1.0 / 3, 1.0 / 2;
  return {CombinationMatrix(Team::One, a1), CombinationMatrix(Team::Two, a2),
          InferenceMatrix(c, 3, CrossMode::Weak), uniform_bipartite_strong(3, 3)};
}

}  // namespace compnet
