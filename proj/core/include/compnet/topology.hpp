#pragma once

// Within-team combination matrices, the cross-team inference matrix, and the
// Perron weights that define each team's objective.
//
// Conventions: entry (l, k) of every mixing matrix scales information flowing
// from agent l to agent k, so columns are the receivers and "left-stochastic"
// means every column sums to one.

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace compnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kStochasticTolerance = 1e-12;
inline constexpr double kPerronTolerance = 1e-10;

enum class Team { One, Two };

constexpr Team opponent(Team t) noexcept { return t == Team::One ? Team::Two : Team::One; }
const char* to_string(Team t) noexcept;

struct TeamConfig {
  int k1 = 1;  // agents in Team 1
  int k2 = 1;  // agents in Team 2
  int m1 = 1;  // dimension of the Team-1 strategy x
  int m2 = 1;  // dimension of the Team-2 strategy y

  int total_agents() const noexcept { return k1 + k2; }
  int agents(Team t) const noexcept { return t == Team::One ? k1 : k2; }
  int strategy_dim(Team t) const noexcept { return t == Team::One ? m1 : m2; }

  /// Throws StructuralError unless every count is at least one.
  void check() const;
};

class CombinationMatrix {
 public:
  /// Throws StructuralError if `entries` is not square or is empty.
  CombinationMatrix(Team team, Matrix entries);

  Team team() const noexcept { return team_; }
  const Matrix& entries() const noexcept { return entries_; }
  int size() const noexcept { return static_cast<int>(entries_.rows()); }

 private:
  Team team_;
  Matrix entries_;
};

enum class CrossMode { Strong, Weak };

const char* to_string(CrossMode m) noexcept;

/// K x K inference matrix, partitioned as [[C1, C12], [C21, C2]] with C1 of size K1 x K1.
class InferenceMatrix {
 public:
  InferenceMatrix(Matrix full, int k1, CrossMode mode);

  static InferenceMatrix from_blocks(const Matrix& c1, const Matrix& c12, const Matrix& c21,
                                     const Matrix& c2, CrossMode mode);

  const Matrix& full() const noexcept { return full_; }
  int k1() const noexcept { return k1_; }
  int k2() const noexcept { return static_cast<int>(full_.rows()) - k1_; }
  CrossMode mode() const noexcept { return mode_; }

  Matrix c1() const { return full_.topLeftCorner(k1(), k1()); }
  Matrix c12() const { return full_.topRightCorner(k1(), k2()); }
  Matrix c21() const { return full_.bottomLeftCorner(k2(), k1()); }
  Matrix c2() const { return full_.bottomRightCorner(k2(), k2()); }

  InferenceMatrix with_mode(CrossMode mode) const { return {full_, k1_, mode}; }

 private:
  Matrix full_;
  int k1_;
  CrossMode mode_;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

class ValidationReport {
 public:
  explicit ValidationReport(std::string subject) : subject_(std::move(subject)) {}

  void add(std::string name, bool passed, std::string detail = {});
  void merge(const ValidationReport& other);

  bool passed() const noexcept;
  const std::string& subject() const noexcept { return subject_; }
  const std::vector<Check>& checks() const noexcept { return checks_; }
  const Check* find(const std::string& name) const;

  nlohmann::json to_json() const;

 private:
  std::string subject_;
  std::vector<Check> checks_;
};

struct PerronWeights {
  Vector p1;
  Vector p2;

  const Vector& of(Team t) const noexcept { return t == Team::One ? p1 : p2; }
};

// --- structural predicates --------------------------------------------------

bool is_nonnegative(const Matrix& m);
bool is_left_stochastic(const Matrix& m, double tol = kStochasticTolerance);
/// Worst |column sum - 1|.
double stochasticity_defect(const Matrix& m);
/// Wielandt test: positive pattern of m^((n-1)^2 + 1) is full.
bool is_primitive(const Matrix& m);
/// Strong connectivity of the digraph with an edge l -> k whenever m(l, k) > 0.
bool is_irreducible(const Matrix& m);

// --- operations ---------------------------------------------------------------

ValidationReport validate_combination_matrix(const CombinationMatrix& a);
/// As above, but first checks the size against the team configuration.
ValidationReport validate_combination_matrix(const CombinationMatrix& a, const TeamConfig& cfg);

ValidationReport validate_inference_matrix(const InferenceMatrix& c, const TeamConfig& cfg);

/// Positive eigenvector of eigenvalue one, normalised to sum one.
/// Throws ValidationError if the matrix fails validation.
Vector perron_vector(const CombinationMatrix& a);
PerronWeights perron_weights(const CombinationMatrix& a1, const CombinationMatrix& a2);

/// Averaging rule a(l, k) = 1 / deg(k) over the closed neighbourhood of k.
/// `adjacency` must be a symmetric 0/1 matrix with self-loops and a connected graph.
CombinationMatrix build_averaging_matrix(Team team, const Matrix& adjacency);

/// Column-normalises a directed 0/1 incidence pattern (entry (l, k) = 1 when l
/// sends to k). Every column needs at least one link.
Matrix normalize_columns(const Matrix& incoming);

/// Strong-mode inference matrix whose cross blocks are uniform over every
/// opposing agent (full bipartite cross-team graph).
InferenceMatrix uniform_bipartite_strong(int k1, int k2);

struct CournotMatrices {
  CombinationMatrix a1;
  CombinationMatrix a2;
  InferenceMatrix c_weak;
  InferenceMatrix c_strong;
};

/// The two-team, three-firm-per-team Cournot setup: within-team combination
/// matrices, the weak inference matrix, and a uniform bipartite strong one.
CournotMatrices paper_cournot_matrices();

}  // namespace compnet
