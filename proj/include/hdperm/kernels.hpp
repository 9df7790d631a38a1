#pragma once

#include <Eigen/Dense>

#include "hdperm/dataset.hpp"

namespace hdperm {

enum class StatisticKind {
  Partial,
  SemiPartial,
  GeneralizedPartial,
  GeneralizedSemiPartial,
  PlainPearson,
};

const char* to_string(StatisticKind k);

/// Sample Pearson correlation with explicit mean-centering of both arguments.
/// Compensated summation keeps the value stable for long vectors.
/// Throws ZeroVariance when a centered argument is (numerically) zero.
double pearson(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Correlation of the least-squares residuals of y and of X[., col] after
/// regressing on Z. Requires q < n and full-rank Z.
double partial_cor(const Dataset& data, int col);

/// Correlation of the y-residuals with the raw column X[., col].
double semi_partial_cor(const Dataset& data, int col);

/// Ridge generalizations: both are correlations of the supplied residual
/// vectors, centered explicitly.
double generalized_partial_cor(const Eigen::VectorXd& ry, const Eigen::VectorXd& rx);
double generalized_semi_partial_cor(const Eigen::VectorXd& ry, const Eigen::VectorXd& x);

} // namespace hdperm
