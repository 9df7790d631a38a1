#pragma once

#include <Eigen/Dense>

namespace hdperm {

/// A regression problem split into outcome, covariates of interest and
/// nuisance covariates. Construction centers y and every column of X and Z;
/// with standardize=true columns are additionally scaled to unit sample
/// standard deviation.
struct Dataset {
  Eigen::VectorXd y; // outcome, length n
  Eigen::MatrixXd X; // n x d covariates of interest
  Eigen::MatrixXd Z; // n x q nuisance covariates

  int n() const { return static_cast<int>(y.size()); }
  int d() const { return static_cast<int>(X.cols()); }
  int q() const { return static_cast<int>(Z.cols()); }
};

/// Validates dimensions and finiteness, then centers (and optionally
/// standardizes) all variables.
Dataset make_dataset(Eigen::VectorXd y, Eigen::MatrixXd X, Eigen::MatrixXd Z,
                     bool standardize = false);

/// Subtracts the sample mean from v.
void center_in_place(Eigen::VectorXd& v);

/// Centers every column; with standardize, also divides by the column sample
/// standard deviation (columns with zero variance are left centered).
void center_columns_in_place(Eigen::MatrixXd& m, bool standardize = false);

} // namespace hdperm
