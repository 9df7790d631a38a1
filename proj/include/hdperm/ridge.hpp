#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace hdperm {

/// SVD-derived representation of the ridge hat operator
/// H_lambda = Z (Z'Z + lambda I)^{-1} Z' and its residual complement,
/// applicable at any penalty without refactorizing.
class RidgeProjector {
public:
  /// Thin SVD of Z truncated at 1e-12 * max(n,q) * s_max.
  /// Throws AllZeroNuisance when every singular value falls below tolerance.
  static RidgeProjector decompose(const Eigen::MatrixXd& Z);

  int n() const { return static_cast<int>(u_.rows()); }
  int q() const { return q_; }
  int rank() const { return static_cast<int>(s_.size()); }

  const Eigen::MatrixXd& left_vectors() const { return u_; }
  const Eigen::VectorXd& singular_values() const { return s_; }

  /// lambda = 0 is the classical least-squares projector, defined only when
  /// Z has full column rank and q < n.
  bool ols_allowed() const { return rank() == q_ && q_ < n(); }

  /// Eigenvalues of H_lambda on the column space: s_i^2 / (s_i^2 + lambda).
  Eigen::VectorXd shrinkage_factors(double lambda) const;

  /// H_lambda v. Throws SingularAtZero when lambda = 0 is not allowed.
  Eigen::VectorXd hat(double lambda, const Eigen::VectorXd& v) const;

  /// v - H_lambda v.
  Eigen::VectorXd residual(double lambda, const Eigen::VectorXd& v) const;

private:
  RidgeProjector(Eigen::MatrixXd u, Eigen::VectorXd s, int q);

  Eigen::MatrixXd u_; // n x r, orthonormal columns
  Eigen::VectorXd s_; // r positive singular values
  int q_;
};

struct GridSpec {
  double lo = 1e-5;
  double hi = 1e5;
  int count = 100;
};

/// Outcome of cross-validated penalty selection. `chosen` is already scaled
/// by n; `grid` holds the raw candidates.
struct PenaltySelection {
  std::vector<double> grid;
  std::vector<int> fold_assignment; // per observation, in {1..K}
  std::vector<double> cv_errors;    // mean of per-fold MSEs, per candidate
  double chosen = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const PenaltySelection&) const = default;
};

/// K-fold cross validation over a log-spaced penalty grid. Each fold fit is a
/// ridge regression with intercept whose effective penalty follows the
/// per-observation convention, so the selected value transfers to the full
/// sample after the final x n scaling. Deterministic given the seed.
PenaltySelection select_penalty(const Eigen::MatrixXd& Z, const Eigen::VectorXd& target,
                                int folds, const GridSpec& grid, std::uint64_t seed);

} // namespace hdperm
