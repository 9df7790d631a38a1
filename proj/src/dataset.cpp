#include "hdperm/dataset.hpp"

#include <cmath>

#include "hdperm/errors.hpp"

namespace hdperm {

void center_in_place(Eigen::VectorXd& v) {
  v.array() -= v.mean();
}

void center_columns_in_place(Eigen::MatrixXd& m, bool standardize) {
  const auto n = m.rows();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    m.col(c).array() -= m.col(c).mean();
    if (standardize) {
      double sd = std::sqrt(m.col(c).squaredNorm() / static_cast<double>(n));
      if (sd > 0.0) m.col(c) /= sd;
    }
  }
}

Dataset make_dataset(Eigen::VectorXd y, Eigen::MatrixXd X, Eigen::MatrixXd Z,
                     bool standardize) {
  const auto n = y.size();
  if (n < 1 || X.cols() < 1 || Z.cols() < 1)
    throw DimensionMismatch("dataset needs n >= 1, d >= 1 and q >= 1");
  if (X.rows() != n || Z.rows() != n)
    throw DimensionMismatch("y, X and Z must have the same number of rows");
  if (!y.allFinite() || !X.allFinite() || !Z.allFinite())
    throw NonFinite("dataset contains a non-finite entry");

  center_in_place(y);
  center_columns_in_place(X, standardize);
  center_columns_in_place(Z, standardize);
  return Dataset{std::move(y), std::move(X), std::move(Z)};
}

} // namespace hdperm
